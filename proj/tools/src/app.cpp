#include "cavgeo_cli/app.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cavgeo/errors.hpp"
#include "cavgeo_cli/commands.hpp"

namespace cavgeo::cli {

namespace {

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return s;
}

int report(std::ostream& err, const std::string& code, int exit_code, const std::string& message) {
  err << "error code=" << code << " exit=" << exit_code << " message=\"" << one_line(message) << "\"\n";
  return exit_code;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvList& env) {
  CLI::App app{"Geometric-phase gate simulator for charge qubits in a cavity"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string format;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--seed", seed, "64-bit base seed (overrides numerics.seed)");
  app.add_option("--jobs", jobs, "sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "csv or json (default depends on the subcommand)");
  app.fallthrough();

  CommandOptions opts;
  std::optional<int> ghz_n;
  std::optional<std::string> mode;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    if (name == "ghz") {
      sub->add_option("--n", ghz_n, "number of qubits");
      sub->add_option("--mode", mode, "ideal or pulsed");
    } else if (name == "shor") {
      sub->add_option("--mode", mode, "ideal or primitive");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report(err, "usage", kConfigError, e.what());
  }

  try {
    json doc = config_path.empty() ? json::object() : load_document(config_path);
    apply_env_overrides(doc, env);
    if (seed) set_path(doc, "numerics.seed", *seed);
    const RunConfig cfg = build_config(doc);
    opts.n_qubits = ghz_n;
    opts.mode = mode;
    opts.jobs = jobs;
    const std::string command = app.get_subcommands().front()->get_name();
    const Result result = run_command(command, cfg, opts);
    const Format fmt = format.empty() ? result.preferred : parse_format(format);
    for (const auto& w : result.warnings) err << "warning " << one_line(w) << '\n';
    if (out_path.empty()) {
      write_result(out, result, fmt);
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write output file '" + out_path + "'");
      write_result(file, result, fmt);
    }
    return kOk;
  } catch (const LeakageError& e) {
    return report(err, e.code(), kPhysicsGuard, e.what());
  } catch (const PhysicsGuardError& e) {
    return report(err, e.code(), kPhysicsGuard, e.what());
  } catch (const ConvergenceError& e) {
    return report(err, "convergence", kConvergence, e.what());
  } catch (const ConfigError& e) {
    return report(err, "config", kConfigError, e.what());
  } catch (const json::exception& e) {
    return report(err, "config", kConfigError, e.what());
  } catch (const std::exception& e) {
    return report(err, "internal", 1, e.what());
  }
}

}  // namespace cavgeo::cli
