#include "cavgeo_cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "cavgeo/entangle.hpp"
#include "cavgeo/errors.hpp"
#include "cavgeo/gates.hpp"
#include "cavgeo/geomphase.hpp"
#include "cavgeo/qecc.hpp"

namespace cavgeo::cli {

namespace {

constexpr double kPi = units::kPi;
// Superconducting flux quantum h/2e, equal to pi hbar / e.
constexpr double kFluxQuantumWb = 2.067833848e-15;

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong value type");
  }
}

cplx complex_value(const json& j, const char* key, cplx fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(std::string("scenario.") + key + ": expected a number or [re, im]");
}

void collect_warnings(const RunConfig& cfg, Result& r) {
  for (auto& w : cfg.device.warnings()) r.warnings.push_back(w);
  for (auto& w : cfg.drive.warnings(cfg.device)) r.warnings.push_back(w);
}

// Device and drive resized to n qubits by repeating qubit 0's settings.
std::pair<DeviceParams, DriveParams> resized(const RunConfig& cfg, int n) {
  if (n == cfg.device.n_qubits()) return {cfg.device, cfg.drive};
  DeviceParams dev = DeviceParams::uniform(n, cfg.device.cavity_frequency, cfg.device.qubits.front());
  DriveParams drive = cfg.drive;
  drive.qubits.assign(static_cast<std::size_t>(n), cfg.drive.qubits.front());
  return {dev, drive};
}

CavityInit parse_init(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("cavity init '" + spec + "': expected kind:value");
  const std::string kind = spec.substr(0, colon);
  const std::string value = spec.substr(colon + 1);
  try {
    if (kind == "fock") return CavityInit::fock_state(std::stoi(value));
    if (kind == "coherent") return CavityInit::coherent(std::stod(value));
    if (kind == "thermal") return CavityInit::thermal(std::stod(value));
  } catch (const std::logic_error&) {
    throw ConfigError("cavity init '" + spec + "': bad value");
  }
  throw ConfigError("cavity init '" + spec + "': kind must be fock, coherent or thermal");
}

json scan_json(const InsensitivityReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) rows.push_back({{"init", r.label}, {"deviation", r.deviation}, {"tail", r.tail}});
  return {{"fock_cutoff", rep.fock_cutoff}, {"max_pairwise", rep.max_pairwise}, {"rows", rows}};
}

std::optional<json> maybe_scan(const RunConfig& cfg, GateSpec::Kind kind, double duration) {
  if (!cfg.scenario.contains("cavity_inits")) return std::nullopt;
  std::vector<CavityInit> inits;
  for (const auto& s : cfg.scenario.at("cavity_inits")) {
    if (!s.is_string()) throw ConfigError("scenario.cavity_inits: expected strings like \"fock:2\"");
    inits.push_back(parse_init(s.get<std::string>()));
  }
  GateSpec spec{kind, {cfg.device, cfg.drive, cfg.numerics}, duration};
  const auto rep = with_fock_retry(cfg.fock_cutoff, [&](int d) {
    return cavity_insensitivity_scan(spec, inits, d, cfg.seed);
  });
  return scan_json(rep);
}

std::string op_label(const NativeOp& op) {
  return std::visit(
      [](const auto& o) -> std::string {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, CarrierRotation>) return std::string("carrier_") + axis_name(o.axis);
        else if constexpr (std::is_same_v<T, CollectivePhase>) return std::string("collective_") + axis_name(o.axis);
        else return "zz";
      },
      op);
}

double op_angle(const NativeOp& op) {
  return std::visit(
      [](const auto& o) -> double {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, CollectivePhase>) return o.gamma;
        else return o.angle;
      },
      op);
}

std::string qubit_list(const std::vector<int>& q) {
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) s += (i ? " " : "") + std::to_string(q[i]);
  return s;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"gate", "ghz", "shor", "phase-audit", "rwa-check", "estimate", "sweep"};
  return names;
}

Result run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts) {
  if (name == "estimate") return cmd_estimate(cfg);
  if (name == "gate") return cmd_gate(cfg);
  if (name == "ghz") return cmd_ghz(cfg, opts);
  if (name == "shor") return cmd_shor(cfg, opts);
  if (name == "phase-audit") return cmd_phase_audit(cfg);
  if (name == "rwa-check") return cmd_rwa_check(cfg);
  if (name == "sweep") return cmd_sweep(cfg, opts);
  throw ConfigError("unknown subcommand '" + name + "'");
}

// ---------------------------------------------------------------------------

Result cmd_estimate(const RunConfig& cfg) {
  require_scenario_keys(cfg.scenario, "estimate", {});
  const auto& q = cfg.device.qubits.front();
  const auto& d = cfg.drive.qubits.front();
  if (cfg.drive.mode != DriveMode::kRamped) throw ConfigError("estimate: needs a ramped drive");
  const double e = q.josephson.a1;
  const double lambda = q.coupling * e;
  const double delta = cfg.drive.detuning(cfg.device, 0);
  const double gate_time = kPi * std::abs(delta) / (2.0 * lambda * lambda);
  const double closure = 2.0 * kPi / std::abs(delta);
  // Josephson relation: omega_phi = 2 e V / hbar, so V[uV] = hbar omega_phi [ueV] / 2.
  const double voltage = units::to_micro_ev(d.ramp_rate) / 2.0;

  Result r;
  r.table.columns = {"quantity", "value", "unit"};
  r.table.add({std::string("lambda"), lambda, std::string("rad/ns")});
  r.table.add({std::string("detuning"), delta, std::string("rad/ns")});
  r.table.add({std::string("detuning_ratio"), std::abs(delta) / d.ramp_rate, std::string("1")});
  r.table.add({std::string("gate_time"), gate_time, std::string("ns")});
  r.table.add({std::string("closure_time"), closure, std::string("ns")});
  r.table.add({std::string("drive_voltage"), voltage, std::string("uV")});
  r.table.add({std::string("flux_quantum"), kFluxQuantumWb, std::string("Wb")});
  if (cfg.context.contains("quality_factor")) {
    const double tau_c = cfg.context.at("quality_factor").get<double>() / cfg.device.cavity_frequency;
    r.table.add({std::string("photon_lifetime"), tau_c * 1e-3, std::string("us")});
  }
  collect_warnings(cfg, r);
  return r;
}

Result cmd_gate(const RunConfig& cfg) {
  require_scenario_keys(cfg.scenario, "gate",
                        {"kind", "loops", "tau", "target_gamma", "duration", "n_max", "cavity_inits", "control",
                         "target", "samples"});
  const std::string kind = get_or<std::string>(cfg.scenario, "kind", "closed", "scenario");
  const int n_max = get_or<int>(cfg.scenario, "n_max", 5, "scenario");
  const int n = cfg.device.n_qubits();
  Result r;
  r.preferred = Format::kJson;
  collect_warnings(cfg, r);

  if (kind == "closed" || kind == "two_pulse") {
    const HilbertLayout layout(n, cfg.fock_cutoff);
    const auto c = uniform_coupling(effective_couplings(cfg.device, cfg.drive));
    Matrix numeric;
    double total_gamma = 0.0;
    double duration = 0.0;
    std::optional<double> analytic_fid;
    if (kind == "closed") {
      const int loops = get_or<int>(cfg.scenario, "loops", 1, "scenario");
      duration = closure_time(c.detuning, loops);
      total_gamma = gamma(c.lambda, c.detuning, duration);
      numeric = evolve_sectorized(c, layout, 0.0, duration, cfg.numerics).matrix();
      analytic_fid = fock_range_fidelity(u_analytic(c, layout, duration).matrix(),
                                         u_closed(total_gamma, c.axis, layout).matrix(), layout, n_max);
    } else {
      if (cfg.scenario.contains("tau")) {
        duration = get_or<double>(cfg.scenario, "tau", 0.0, "scenario");
      } else {
        const double target = get_or<double>(cfg.scenario, "target_gamma", ghz_gamma(n), "scenario");
        duration = two_pulse_duration(c.lambda, c.detuning, target);
      }
      total_gamma = 2.0 * gamma(c.lambda, c.detuning, duration / 2.0);
      numeric = run_schedule_sectorized(two_pulse_schedule(cfg.device, cfg.drive, duration), layout, cfg.numerics)
                    .matrix();
    }
    const Matrix closed = u_closed(total_gamma, c.axis, layout).matrix();
    const double fid = fock_range_fidelity(numeric, closed, layout, n_max);
    const StateVector out(layout, numeric * StateVector::basis(layout, 0, 0).amplitudes());
    std::vector<Factor> qubits;
    for (int j = 0; j < n; ++j) qubits.push_back(Factor::qubit(j));
    const double residual = 1.0 - purity(partial_trace(out, qubits));

    r.table.columns = {"kind", "gamma", "duration_ns", "fidelity", "residual_entanglement"};
    r.table.add({kind, total_gamma, duration, fid, residual});
    r.document = {{"kind", kind},         {"n_qubits", n},           {"gamma", total_gamma},
                  {"duration_ns", duration}, {"fidelity", fid},        {"residual_entanglement", residual},
                  {"fock_cutoff", cfg.fock_cutoff}, {"n_max", n_max}};
    if (analytic_fid) r.document["analytic_fidelity"] = *analytic_fid;
    if (auto scan = maybe_scan(cfg, kind == "closed" ? GateSpec::Kind::kSinglePulse : GateSpec::Kind::kTwoPulse,
                               duration)) {
      r.document["cavity_scan"] = *scan;
    }
    return r;
  }

  if (kind == "inhomog") {
    if (n != 2) throw ConfigError("gate inhomog: needs exactly two qubits");
    const HilbertLayout layout(n, cfg.fock_cutoff);
    const auto cs = effective_couplings(cfg.device, cfg.drive);
    const double duration = cfg.scenario.contains("duration")
                                ? get_or<double>(cfg.scenario, "duration", 0.0, "scenario")
                                : closure_time(cs[0].detuning, get_or<int>(cfg.scenario, "loops", 1, "scenario"));
    const std::array<ResonantQubit, 2> pair{ResonantQubit{0, cs[0]}, ResonantQubit{1, cs[1]}};
    const Matrix closed = u_inhomog(pair, layout, duration).matrix();
    const HamiltonianFn h = [&](double t) { return h_eff(cs, layout, t); };
    const Matrix numeric = evolve_numeric(h, 0.0, duration, cfg.numerics);
    const double fid = fock_range_fidelity(closed, numeric, layout, n_max);
    const double g01 = gamma_jl(cs[0], cs[1], duration);
    const double g10 = gamma_jl(cs[1], cs[0], duration);
    const double cross = g01 + g10;
    const bool cz = std::abs(std::remainder(cross - kPi / 4.0, kPi / 2.0)) < 1e-6;
    r.table.columns = {"kind", "gamma_01", "gamma_10", "cross_angle", "duration_ns", "fidelity", "cz_equivalent"};
    r.table.add({kind, g01, g10, cross, duration, fid, cz});
    r.document = {{"kind", kind},          {"gamma_01", g01},      {"gamma_10", g10},
                  {"cross_angle", cross},  {"duration_ns", duration}, {"fidelity", fid},
                  {"cz_equivalent", cz},   {"fock_cutoff", cfg.fock_cutoff}};
    return r;
  }

  if (kind == "cnot") {
    const int control = get_or<int>(cfg.scenario, "control", 0, "scenario");
    const int target = get_or<int>(cfg.scenario, "target", 1, "scenario");
    const GatePlan plan = cnot_plan(control, target, std::max(n, 2));
    r.table.columns = {"step", "op", "qubits", "angle"};
    json ops = json::array();
    for (std::size_t i = 0; i < plan.ops.size(); ++i) {
      const auto q = native_qubits(plan.ops[i]);
      r.table.add({static_cast<long long>(i), op_label(plan.ops[i]), qubit_list(q), op_angle(plan.ops[i])});
      ops.push_back({{"op", op_label(plan.ops[i])}, {"qubits", q}, {"angle", op_angle(plan.ops[i])}});
    }
    r.document = {{"kind", kind}, {"control", control}, {"target", target},
                  {"certified_fidelity", plan.certified_fidelity()}, {"ops", ops}};
    return r;
  }

  if (kind == "locus") {
    const int samples = get_or<int>(cfg.scenario, "samples", 64, "scenario");
    const auto locus = cz_equivalence_locus(samples);
    r.table.columns = {"theta"};
    for (double t : locus) r.table.add({t});
    r.document = {{"kind", kind}, {"samples", samples}, {"cz_equivalent_theta", locus}};
    return r;
  }
  throw ConfigError("scenario.kind: expected closed, two_pulse, inhomog, cnot or locus");
}

Result cmd_ghz(const RunConfig& cfg, const CommandOptions& opts) {
  require_scenario_keys(cfg.scenario, "ghz", {"n", "mode"});
  const int n = opts.n_qubits.value_or(get_or<int>(cfg.scenario, "n", cfg.device.n_qubits(), "scenario"));
  const std::string mode = opts.mode.value_or(get_or<std::string>(cfg.scenario, "mode", "ideal", "scenario"));
  if (n < 2 || n > 12) throw ConfigError("ghz: n must lie in 2..12");
  GhzOptions g;
  HilbertLayout layout(n, 1);
  if (mode == "pulsed") {
    auto [dev, drive] = resized(cfg, n);
    g.mode = PrepMode::kPulsed;
    g.setup = PulseSetup{dev, drive, cfg.numerics};
    layout = HilbertLayout(n, cfg.fock_cutoff);
  } else if (mode != "ideal") {
    throw ConfigError("ghz: mode must be ideal or pulsed");
  }
  const StateVector state = ghz_prepare(n, layout, g);
  if (layout.fock_cutoff() > 2) leakage_guard(state);
  const GhzReport rep = ghz_report(state, n);

  double min_weight = 1.0;
  int max_rank = 0;
  json parts = json::array();
  for (const auto& b : rep.bipartitions) {
    min_weight = std::min(min_weight, b.spectrum.size() > 1 ? b.spectrum[1] : 0.0);
    max_rank = std::max(max_rank, schmidt_rank(b.spectrum));
    parts.push_back({{"part", b.part}, {"spectrum", b.spectrum}});
  }
  Result r;
  r.preferred = Format::kJson;
  r.table.columns = {"n", "mode", "fidelity", "phase_zero", "phase_one", "min_second_schmidt", "max_schmidt_rank"};
  r.table.add({static_cast<long long>(n), mode, rep.fidelity, rep.phase_zero, rep.phase_one, min_weight,
               static_cast<long long>(max_rank)});
  r.document = {{"n", n},
                {"parity", rep.even ? "even" : "odd"},
                {"mode", mode},
                {"fidelity", rep.fidelity},
                {"phase_zero", rep.phase_zero},
                {"phase_one", rep.phase_one},
                {"bipartitions", parts}};
  if (mode == "pulsed") collect_warnings(cfg, r);
  return r;
}

Result cmd_shor(const RunConfig& cfg, const CommandOptions& opts) {
  require_scenario_keys(cfg.scenario, "shor", {"alpha", "beta", "mode"});
  const cplx a = complex_value(cfg.scenario, "alpha", 1.0);
  const cplx b = complex_value(cfg.scenario, "beta", 0.0);
  const std::string mode = opts.mode.value_or(get_or<std::string>(cfg.scenario, "mode", "ideal", "scenario"));
  if (mode != "ideal" && mode != "primitive") throw ConfigError("shor: mode must be ideal or primitive");
  const StateVector state = shor_encode(a, b, mode == "ideal" ? EncodeMode::kIdeal : EncodeMode::kPrimitive);
  const Vector ideal = shor_encode(a, b).amplitudes();
  const double fid = fidelity(register_state(state), ideal);
  const auto gens = shor_stabilizers();
  const auto values = stabilizer_check(state, gens);
  Result r;
  r.table.columns = {"generator", "expectation"};
  json stab = json::array();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    r.table.add({gens[i].ops, values[i]});
    stab.push_back({{"generator", gens[i].ops}, {"expectation", values[i]}});
  }
  r.document = {{"mode", mode}, {"fidelity_to_ideal", fid}, {"stabilizers", stab}};
  return r;
}

Result cmd_phase_audit(const RunConfig& cfg) {
  require_scenario_keys(cfg.scenario, "phase-audit", {"sectors", "loops"});
  const int n = cfg.device.n_qubits();
  std::vector<int> sectors;
  for (int m = -n; m <= n; m += 2) sectors.push_back(m);
  sectors = get_or<std::vector<int>>(cfg.scenario, "sectors", sectors, "scenario");
  const auto loops = get_or<std::vector<int>>(cfg.scenario, "loops", std::vector<int>{1}, "scenario");
  const auto c = uniform_coupling(effective_couplings(cfg.device, cfg.drive));
  PhaseAuditOptions po;
  po.steps_per_loop = cfg.steps_per_loop;
  Result r;
  r.table.columns = {"m", "loops", "duration_ns", "total", "dynamic", "geometric", "area", "relation_residual"};
  for (int k : loops) {
    if (k < 1) throw ConfigError("scenario.loops: closure indices start at 1");
    const double t = closure_time(c.detuning, k);
    for (int m : sectors) {
      const PhaseAudit a = phase_decompose(c, m, t, po);
      r.table.add({static_cast<long long>(m), static_cast<long long>(k), t, a.total, a.dynamic, a.geometric, a.area,
                   std::abs(a.dynamic + 2.0 * a.geometric)});
    }
  }
  collect_warnings(cfg, r);
  return r;
}

Result cmd_rwa_check(const RunConfig& cfg) {
  require_scenario_keys(cfg.scenario, "rwa-check", {"couplings", "loops"});
  const auto couplings =
      get_or<std::vector<double>>(cfg.scenario, "couplings", std::vector<double>{0.01, 0.02, 0.05, 0.1}, "scenario");
  const int loops = get_or<int>(cfg.scenario, "loops", 1, "scenario");
  const HilbertLayout layout(cfg.device.n_qubits(), cfg.fock_cutoff);
  Result r;
  r.table.columns = {"coupling", "fidelity", "detuning_ratio"};
  json rows = json::array();
  double prev = 2.0;
  bool monotone = true;
  for (double g : couplings) {
    DeviceParams dev = cfg.device;
    for (auto& q : dev.qubits) q.coupling = g;
    dev.validate();
    const double delta = cfg.drive.detuning(dev, 0);
    const double t = closure_time(delta, loops);
    const double f = rwa_fidelity(dev, cfg.drive, layout, t, cfg.numerics);
    const double ratio = std::abs(delta) / cfg.drive.qubits.front().ramp_rate;
    r.table.add({g, f, ratio});
    monotone = monotone && f <= prev;
    prev = f;
  }
  r.document = {{"rows", r.table.to_json()}, {"monotone_decreasing", monotone}};
  collect_warnings(cfg, r);
  return r;
}

Result cmd_sweep(const RunConfig& cfg, const CommandOptions& opts) {
  require_scenario_keys(cfg.scenario, "sweep", {"command", "key", "values", "start", "stop", "count", "scenario"});
  const std::string command = get_or<std::string>(cfg.scenario, "command", "", "scenario");
  if (command.empty() || command == "sweep") throw ConfigError("sweep: scenario.command must name another subcommand");
  const std::string key = get_or<std::string>(cfg.scenario, "key", "", "scenario");
  if (key.empty()) throw ConfigError("sweep: scenario.key is required");
  std::vector<double> values;
  if (cfg.scenario.contains("values")) {
    values = get_or<std::vector<double>>(cfg.scenario, "values", {}, "scenario");
  } else {
    const double start = get_or<double>(cfg.scenario, "start", 0.0, "scenario");
    const double stop = get_or<double>(cfg.scenario, "stop", 0.0, "scenario");
    const int count = get_or<int>(cfg.scenario, "count", 0, "scenario");
    if (count < 1) throw ConfigError("sweep: give values or start/stop/count with count >= 1");
    for (int i = 0; i < count; ++i) values.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
  }
  if (values.empty()) throw ConfigError("sweep: empty value grid");
  const json inner = cfg.scenario.contains("scenario") ? cfg.scenario.at("scenario") : json::object();

  std::vector<Result> results(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        json doc = cfg.raw;
        set_path(doc, key, values[i]);
        doc["scenario"] = inner;
        set_path(doc, "numerics.seed", stream_seed(cfg.seed, i));
        const RunConfig point = build_config(doc);
        results[i] = run_command(command, point, {std::nullopt, std::nullopt, 1});
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Result r;
  r.table.columns = {"index", key};
  const auto& first = results.front().table.columns;
  r.table.columns.insert(r.table.columns.end(), first.begin(), first.end());
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].table.columns != first) throw ConfigError("sweep: result columns changed across the grid");
    for (const auto& row : results[i].table.rows) {
      std::vector<Cell> full{static_cast<long long>(i), values[i]};
      full.insert(full.end(), row.begin(), row.end());
      r.table.add(std::move(full));
    }
    for (const auto& w : results[i].warnings) r.warnings.push_back("point " + std::to_string(i) + ": " + w);
  }
  return r;
}

}  // namespace cavgeo::cli
