#include "cavgeo_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "cavgeo/errors.hpp"

namespace cavgeo::cli {

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::string text(const json& j, const std::string& key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

const json& block(const json& doc, const char* name) {
  static const json empty = json::object();
  return doc.contains(name) ? doc.at(name) : empty;
}

JosephsonEnergies josephson(const json& j, JosephsonEnergies fallback, const std::string& unit,
                            const std::string& where) {
  if (!j.contains("josephson")) return fallback;
  const auto& v = j.at("josephson");
  if (v.is_number()) return JosephsonEnergies::uniform(to_internal_energy(v.get<double>(), unit));
  require_keys(v, where + ".josephson", {"a1", "a2", "b1", "b2"});
  for (const char* k : {"a1", "a2", "b1", "b2"}) {
    if (!v.contains(k)) throw ConfigError(where + ".josephson: missing '" + std::string(k) + "'");
  }
  const std::string w = where + ".josephson";
  return {to_internal_energy(number(v, "a1", 0, w), unit), to_internal_energy(number(v, "a2", 0, w), unit),
          to_internal_energy(number(v, "b1", 0, w), unit), to_internal_energy(number(v, "b2", 0, w), unit)};
}

QubitDevice qubit_device(const json& j, const QubitDevice& base, const std::string& unit, const std::string& where) {
  QubitDevice q = base;
  if (j.contains("charging_energy")) q.charging_energy = to_internal_energy(number(j, "charging_energy", 0, where), unit);
  q.induced_charge = number(j, "induced_charge", q.induced_charge, where);
  q.josephson = josephson(j, q.josephson, unit, where);
  q.coupling = number(j, "coupling", q.coupling, where);
  return q;
}

QubitDrive qubit_drive(const json& j, const QubitDrive& base, double cavity_frequency, const std::string& unit,
                       const std::string& where) {
  QubitDrive q = base;
  const int rate_keys = static_cast<int>(j.contains("ramp_rate")) + static_cast<int>(j.contains("detuning")) +
                        static_cast<int>(j.contains("detuning_ratio"));
  if (rate_keys > 1) throw ConfigError(where + ": give only one of ramp_rate, detuning, detuning_ratio");
  if (j.contains("ramp_rate")) q.ramp_rate = to_internal_energy(number(j, "ramp_rate", 0, where), unit);
  if (j.contains("detuning")) q.ramp_rate = cavity_frequency - to_internal_energy(number(j, "detuning", 0, where), unit);
  if (j.contains("detuning_ratio")) q.ramp_rate = cavity_frequency * (1.0 - number(j, "detuning_ratio", 0, where));
  q.offset = number(j, "offset", q.offset, where);
  q.branch = integer(j, "branch", q.branch, where);
  q.phi_plus = number(j, "phi_plus", q.phi_plus, where);
  q.phi_minus = number(j, "phi_minus", q.phi_minus, where);
  return q;
}

}  // namespace

double to_internal_energy(double value, const std::string& unit) {
  if (unit == "ueV") return units::from_micro_ev(value);
  if (unit == "rad/ns") return value;
  throw ConfigError("units.energy: expected 'ueV' or 'rad/ns', got '" + unit + "'");
}

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void set_path(json& doc, const std::string& dotted, const json& value) {
  if (dotted.empty()) throw ConfigError("empty config key path");
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("malformed config key path '" + dotted + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("config key path '" + dotted + "' crosses a non-object value");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

void apply_env_overrides(json& doc, const EnvList& env) {
  static const std::string prefix = "CAVGEO_";
  std::vector<std::pair<std::string, std::string>> sorted(env.begin(), env.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [name, raw] : sorted) {
    if (name.rfind(prefix, 0) != 0) continue;
    std::string path = name.substr(prefix.size());
    std::transform(path.begin(), path.end(), path.begin(), [](unsigned char c) { return std::tolower(c); });
    std::string dotted;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (path.compare(i, 2, "__") == 0) {
        dotted += '.';
        ++i;
      } else {
        dotted += path[i];
      }
    }
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    set_path(doc, dotted, value);
  }
}

void require_scenario_keys(const json& scenario, const std::string& command,
                           std::initializer_list<const char*> allowed) {
  std::set<std::string> keys;
  for (const char* k : allowed) keys.insert(k);
  require_keys(scenario, "scenario (" + command + ")", keys);
}

RunConfig build_config(const json& doc) {
  require_keys(doc, "config", {"units", "device", "drive", "numerics", "scenario", "context"});
  RunConfig cfg;
  cfg.raw = doc;

  const json& u = block(doc, "units");
  require_keys(u, "units", {"energy", "time"});
  cfg.energy_unit = text(u, "energy", "ueV", "units");
  to_internal_energy(1.0, cfg.energy_unit);
  if (text(u, "time", "ns", "units") != "ns") throw ConfigError("units.time: only 'ns' is supported");
  const std::string& unit = cfg.energy_unit;
  const double ueV = unit == "ueV" ? 1.0 : units::from_micro_ev(1.0);

  const json& d = block(doc, "device");
  require_keys(d, "device",
               {"n_qubits", "cavity_frequency", "charging_energy", "induced_charge", "josephson", "coupling", "qubits"});
  QubitDevice base;
  base.charging_energy = to_internal_energy(100.0 * ueV, unit);
  base.josephson = JosephsonEnergies::uniform(to_internal_energy(40.0 * ueV, unit));
  base.coupling = 1e-2;
  base = qubit_device(d, base, unit, "device");
  const double omega_c = to_internal_energy(number(d, "cavity_frequency", 30.0 * ueV, "device"), unit);
  int n = integer(d, "n_qubits", 2, "device");
  if (d.contains("qubits")) {
    const auto& list = d.at("qubits");
    if (!list.is_array()) throw ConfigError("device.qubits: expected an array");
    if (d.contains("n_qubits") && static_cast<int>(list.size()) != n) {
      throw ConfigError("device.qubits: length disagrees with device.n_qubits");
    }
    n = static_cast<int>(list.size());
  }
  if (n < 1 || n > 12) throw ConfigError("device.n_qubits: expected 1..12");
  cfg.device = DeviceParams::uniform(n, omega_c, base);
  if (d.contains("qubits")) {
    for (int j = 0; j < n; ++j) {
      const std::string where = "device.qubits[" + std::to_string(j) + "]";
      const auto& q = d.at("qubits").at(static_cast<std::size_t>(j));
      require_keys(q, where, {"charging_energy", "induced_charge", "josephson", "coupling"});
      cfg.device.qubits[static_cast<std::size_t>(j)] = qubit_device(q, base, unit, where);
    }
  }
  cfg.device.validate();

  const json& dr = block(doc, "drive");
  require_keys(dr, "drive",
               {"mode", "ramp_rate", "detuning", "detuning_ratio", "offset", "branch", "phi_plus", "phi_minus", "qubits"});
  const std::string mode = text(dr, "mode", "ramped", "drive");
  if (mode != "ramped" && mode != "static") throw ConfigError("drive.mode: expected 'ramped' or 'static'");
  QubitDrive qd;
  qd.ramp_rate = 0.9 * omega_c;
  qd.phi_plus = units::kPi / 2.0;
  qd = qubit_drive(dr, qd, omega_c, unit, "drive");
  cfg.drive.mode = mode == "ramped" ? DriveMode::kRamped : DriveMode::kStatic;
  cfg.drive.qubits.assign(static_cast<std::size_t>(n), qd);
  if (dr.contains("qubits")) {
    const auto& list = dr.at("qubits");
    if (!list.is_array() || static_cast<int>(list.size()) != n) {
      throw ConfigError("drive.qubits: expected an array with one entry per qubit");
    }
    for (int j = 0; j < n; ++j) {
      const std::string where = "drive.qubits[" + std::to_string(j) + "]";
      const auto& q = list.at(static_cast<std::size_t>(j));
      require_keys(q, where, {"ramp_rate", "detuning", "detuning_ratio", "offset", "branch", "phi_plus", "phi_minus"});
      cfg.drive.qubits[static_cast<std::size_t>(j)] = qubit_drive(q, qd, omega_c, unit, where);
    }
  }
  cfg.drive.validate(cfg.device);

  const json& nm = block(doc, "numerics");
  require_keys(nm, "numerics", {"tol", "fock_cutoff", "seed", "steps_per_loop"});
  cfg.numerics.tol = number(nm, "tol", 1e-10, "numerics");
  if (!(cfg.numerics.tol >= 1e-13 && cfg.numerics.tol <= 1e-6)) throw ConfigError("numerics.tol: expected [1e-13, 1e-6]");
  cfg.fock_cutoff = integer(nm, "fock_cutoff", 20, "numerics");
  if (cfg.fock_cutoff < 2 || cfg.fock_cutoff > 200) throw ConfigError("numerics.fock_cutoff: expected 2..200");
  cfg.steps_per_loop = integer(nm, "steps_per_loop", 1024, "numerics");
  if (cfg.steps_per_loop < 16) throw ConfigError("numerics.steps_per_loop: expected >= 16");
  if (nm.contains("seed")) {
    const auto& s = nm.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("numerics.seed: expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  cfg.scenario = block(doc, "scenario");
  require_object(cfg.scenario, "scenario");
  const json& ctx = block(doc, "context");
  require_keys(ctx, "context", {"quality_factor", "photon_lifetime_us", "note"});
  for (const char* k : {"quality_factor", "photon_lifetime_us"}) {
    if (ctx.contains(k) && !(ctx.at(k).is_number() && ctx.at(k).get<double>() > 0.0)) {
      throw ConfigError(std::string("context.") + k + ": expected a positive number");
    }
  }
  cfg.context = ctx;
  return cfg;
}

}  // namespace cavgeo::cli
