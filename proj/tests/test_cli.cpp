#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cavgeo/model.hpp"
#include "cavgeo_cli/app.hpp"
#include "cavgeo_cli/commands.hpp"

namespace cavgeo::cli {
namespace {

namespace fs = std::filesystem;

struct RunOutput {
  int code = 0;
  std::string out;
  std::string err;
};

RunOutput run(std::vector<std::string> args, const EnvList& env = {}) {
  args.insert(args.begin(), "cavgeo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  RunOutput r;
  r.code = run_app(static_cast<int>(argv.size()), argv.data(), out, err, env);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path write_config(const std::string& name, const json& doc) {
  const fs::path p = fs::temp_directory_path() / ("cavgeo_test_" + name + ".json");
  std::ofstream(p) << doc.dump(2);
  return p;
}

// Value column of the estimate table for a named quantity.
double estimate_value(const std::string& csv, const std::string& quantity) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(quantity + ",", 0) == 0) {
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      return std::stod(line.substr(a + 1, b - a - 1));
    }
  }
  ADD_FAILURE() << "missing " << quantity;
  return 0.0;
}

TEST(Cli, EstimateDefaults) {
  const RunOutput r = run({"estimate"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("quantity,value,unit\n", 0), 0u);
  const double tau = estimate_value(r.out, "gate_time");
  const double volts = estimate_value(r.out, "drive_voltage");
  EXPECT_GE(tau, 18.5);
  EXPECT_LE(tau, 21.0);
  EXPECT_GE(volts, 12.0);
  EXPECT_LE(volts, 15.0);
  // lambda = g E and delta = 0.1 omega_c at the default 40 and 30 ueV.
  const double lambda = 0.01 * units::from_micro_ev(40.0);
  const double delta = 0.1 * units::from_micro_ev(30.0);
  EXPECT_NEAR(tau, units::kPi * delta / (2 * lambda * lambda), 1e-9 * tau);
  EXPECT_NEAR(volts, 13.5, 1e-9);
}

TEST(Cli, QualityFactorAddsLifetime) {
  const auto cfg = write_config("q", {{"context", {{"quality_factor", 1e4}}}});
  const RunOutput r = run({"--config", cfg.string(), "estimate"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("photon_lifetime"), std::string::npos);
}

TEST(Cli, GhzIdealJson) {
  const RunOutput r = run({"ghz", "--n", "4", "--mode", "ideal"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_NEAR(doc.at("fidelity").get<double>(), 1.0, 1e-10);
  EXPECT_EQ(doc.at("parity"), "even");
  EXPECT_EQ(doc.at("bipartitions").size(), 7u);
  EXPECT_NEAR(doc.at("phase_zero").get<double>(), -units::kPi / 4, 1e-9);
}

TEST(Cli, GhzCsvFormat) {
  const RunOutput r = run({"--format", "csv", "ghz", "--n", "3"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(r.out.rfind("n,mode,fidelity,", 0), 0u);
}

TEST(Cli, ShorPrimitive) {
  const auto cfg = write_config("shor", {{"scenario", {{"alpha", 0.6}, {"beta", {0.0, 0.8}}}}});
  const RunOutput r = run({"--config", cfg.string(), "--format", "json", "shor", "--mode", "primitive"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_GE(doc.at("fidelity_to_ideal").get<double>(), 1.0 - 1e-8);
  for (const auto& s : doc.at("stabilizers")) EXPECT_NEAR(s.at("expectation").get<double>(), 1.0, 1e-8);
}

TEST(Cli, PhaseAuditRelation) {
  const auto cfg = write_config(
      "audit", {{"scenario", {{"sectors", {2}}, {"loops", {1, 2}}}}, {"numerics", {{"steps_per_loop", 256}}}});
  const RunOutput r = run({"--config", cfg.string(), "phase-audit"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "m,loops,duration_ns,total,dynamic,geometric,area,relation_residual");
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_LT(std::stod(line.substr(line.rfind(',') + 1)), 1e-6);
  }
  EXPECT_EQ(rows, 2);
}

TEST(Cli, DeterministicOutput) {
  const auto cfg = write_config("det", {{"scenario", {{"cavity_inits", {"fock:0", "fock:2", "thermal:0.2"}}}},
                                        {"device", {{"coupling", 0.02}}},
                                        {"numerics", {{"seed", 42}}}});
  const RunOutput a = run({"--config", cfg.string(), "gate"});
  const RunOutput b = run({"--config", cfg.string(), "gate"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
}

TEST(Cli, WritesOutFile) {
  const fs::path p = fs::temp_directory_path() / "cavgeo_test_out.csv";
  fs::remove(p);
  const RunOutput r = run({"--out", p.string(), "estimate"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), run({"estimate"}).out);
}

TEST(Cli, EnvOverrideWins) {
  const auto cfg = write_config("env", {{"device", {{"coupling", 0.01}}}});
  const RunOutput base = run({"--config", cfg.string(), "estimate"});
  const RunOutput over = run({"--config", cfg.string(), "estimate"}, {{"CAVGEO_DEVICE__COUPLING", "0.02"}, {"HOME", "/x"}});
  ASSERT_EQ(over.code, kOk) << over.err;
  EXPECT_NEAR(estimate_value(over.out, "gate_time"), estimate_value(base.out, "gate_time") / 4, 1e-9);
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto cfg = write_config("bad", {{"device", {{"colour", "blue"}}}});
  const RunOutput r = run({"--config", cfg.string(), "estimate"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_EQ(r.err.rfind("error code=config exit=2 message=\"", 0), 0u);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_TRUE(r.out.empty());

  EXPECT_EQ(run({"frobnicate"}).code, kConfigError);
  EXPECT_EQ(run({}).code, kConfigError);
  EXPECT_EQ(run({"--config", "/nonexistent/cfg.json", "estimate"}).code, kConfigError);
  EXPECT_EQ(run({"ghz", "--n", "1"}).code, kConfigError);
  EXPECT_EQ(run({"--format", "xml", "estimate"}).code, kConfigError);
  const auto scen = write_config("scen", {{"scenario", {{"bogus", 1}}}});
  EXPECT_EQ(run({"--config", scen.string(), "estimate"}).code, kConfigError);
}

TEST(Cli, PhysicsGuardExitsThree) {
  // A ramp at the cavity frequency leaves no detuning.
  const auto cfg = write_config("guard", {{"drive", {{"ramp_rate", 30.0}}}});
  const RunOutput r = run({"--config", cfg.string(), "estimate"});
  EXPECT_EQ(r.code, kPhysicsGuard);
  EXPECT_EQ(r.err.rfind("error code=", 0), 0u);
  EXPECT_NE(r.err.find(" exit=3 "), std::string::npos);
}

TEST(Cli, SweepOrderIndependentOfJobs) {
  const auto cfg = write_config(
      "sweep", {{"scenario", {{"command", "estimate"}, {"key", "device.coupling"}, {"values", {0.01, 0.02, 0.03, 0.04}}}}});
  const RunOutput one = run({"--config", cfg.string(), "sweep"});
  const RunOutput two = run({"--config", cfg.string(), "--jobs", "2", "sweep"});
  ASSERT_EQ(one.code, kOk) << one.err;
  EXPECT_EQ(one.out, two.out);
  EXPECT_EQ(one.out.rfind("index,device.coupling,quantity,value,unit\n", 0), 0u);
}

TEST(Cli, StreamSeedsDistinct) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(7, 3), stream_seed(7, 3));
  // Reference value of the splitmix64 finalizer for input 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Cli, HelpExitsZero) {
  const RunOutput r = run({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("phase-audit"), std::string::npos);
}

#ifdef CAVGEO_EXE
TEST(Cli, BinaryExitCode) {
  const std::string cmd = std::string(CAVGEO_EXE) + " ghz --n 1 >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kConfigError);
  EXPECT_EQ(std::system((std::string(CAVGEO_EXE) + " estimate >/dev/null").c_str()), 0);
}
#endif

}  // namespace
}  // namespace cavgeo::cli
