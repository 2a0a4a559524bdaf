#include "cavgeo/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cavgeo {

namespace {

constexpr double kPi = units::kPi;

Vector vacuum(int d) {
  Vector v = Vector::Zero(d);
  v[0] = 1.0;
  return v;
}

Matrix qubit_marginal(const StateVector& state) {
  const int n = state.layout().n_qubits();
  if (state.layout().fock_cutoff() == 1) {
    return state.amplitudes() * state.amplitudes().adjoint();
  }
  std::vector<Factor> keep;
  for (int j = 0; j < n; ++j) keep.push_back(Factor::qubit(j));
  return partial_trace(state, keep);
}

void apply_carrier(Vector& amps, const HilbertLayout& layout, const Eigen::Matrix2cd& rot) {
  for (int j = 0; j < layout.n_qubits(); ++j) {
    const int q[] = {j};
    apply_qubits(amps, layout, rot, q);
  }
}

Vector prepare_pulsed(int n, const HilbertLayout& layout, const Vector& initial, const PulseSetup& setup) {
  const auto c = uniform_coupling(effective_couplings(setup.device, setup.drive));
  if (c.axis != Axis::kX) throw ConfigError("ghz_prepare: pulsed mode needs the sigma_x branch");
  const double tau = two_pulse_duration(c.lambda, c.detuning, ghz_gamma(n));
  const auto u = run_schedule_sectorized(two_pulse_schedule(setup.device, setup.drive, tau), layout, setup.numerics);
  Vector out = u.matrix() * initial;
  if (n % 2 == 1) {
    // Static-flux carrier at phi+ = pi/2, phi- = 0 for exp(-i pi/4 sigma_x) on every qubit.
    const std::vector<double> phi_plus(static_cast<std::size_t>(n), kPi / 2.0);
    const auto h = h_carrier(setup.device, phi_plus, layout, Axis::kX);
    const double rate = std::abs(carrier_rate(setup.device.qubits.front(), kPi / 2.0, 0.0));
    out = expm_hermitian(h.matrix(), (kPi / 4.0) / rate) * out;
  }
  return out;
}

}  // namespace

PulseSetup PulseSetup::reference(int n_qubits) {
  QubitDevice q;
  q.charging_energy = units::from_micro_ev(100.0);
  q.induced_charge = 0.5;
  q.josephson = JosephsonEnergies::uniform(units::from_micro_ev(40.0));
  q.coupling = 1e-2;
  const double omega_c = units::from_micro_ev(30.0);
  PulseSetup s;
  s.device = DeviceParams::uniform(n_qubits, omega_c, q);
  s.drive = DriveParams::ramped(n_qubits, 0.9 * omega_c, 0.0, 0);
  return s;
}

double ghz_gamma(int n_qubits) {
  // J^2 is 0 mod 4 for even N and 1 mod 8 for odd N.
  const double period = n_qubits % 2 == 0 ? kPi / 2.0 : kPi / 4.0;
  double g = ms_gamma(kPi / 2.0);
  while (g <= 0.0) g += period;
  return g;
}

StateVector ghz_prepare(int n_qubits, const HilbertLayout& layout, const GhzOptions& opts) {
  if (n_qubits < 2) throw ConfigError("ghz_prepare: need at least two qubits");
  if (layout.n_qubits() != n_qubits) throw ConfigError("ghz_prepare: layout qubit count mismatch");
  const int d = layout.fock_cutoff();
  const Vector cavity = opts.cavity.value_or(vacuum(d));
  if (cavity.size() != d) throw ConfigError("ghz_prepare: cavity state has the wrong dimension");
  Vector reg = Vector::Zero(layout.qubit_dim());
  reg[0] = 1.0;
  const Vector initial = kron(reg, cavity);

  if (opts.mode == PrepMode::kPulsed) {
    const PulseSetup setup = opts.setup.value_or(PulseSetup::reference(n_qubits));
    return StateVector(layout, prepare_pulsed(n_qubits, layout, initial, setup));
  }

  Vector amps = initial;
  std::vector<int> all(static_cast<std::size_t>(n_qubits));
  for (int j = 0; j < n_qubits; ++j) all[static_cast<std::size_t>(j)] = j;
  apply_qubits(amps, layout, collective_phase_gate(ms_gamma(kPi / 2.0), Axis::kX, n_qubits), all);
  if (n_qubits % 2 == 1) {
    const Eigen::Matrix2cd rot =
        std::cos(kPi / 4.0) * Eigen::Matrix2cd::Identity() - kI * std::sin(kPi / 4.0) * pauli(Axis::kX);
    apply_carrier(amps, layout, rot);
  }
  return StateVector(layout, std::move(amps));
}

Vector ghz_target(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vector v = Vector::Zero(dim);
  v[0] = std::exp(-kI * (kPi / 4.0)) / std::sqrt(2.0);
  v[dim - 1] = std::exp(kI * kPi * (0.25 + n_qubits / 2.0)) / std::sqrt(2.0);
  return v;
}

double ghz_fidelity(const StateVector& state, int n_qubits) {
  if (state.layout().n_qubits() != n_qubits) throw ConfigError("ghz_fidelity: qubit count mismatch");
  const Matrix rho = qubit_marginal(state);
  if (n_qubits % 2 == 0) {
    const Vector t = ghz_target(n_qubits);
    return std::clamp(t.dot(rho * t).real(), 0.0, 1.0);
  }
  const Eigen::Index last = rho.rows() - 1;
  const double f = 0.5 * (rho(0, 0).real() + rho(last, last).real()) + std::abs(rho(0, last));
  return std::clamp(f, 0.0, 1.0);
}

std::vector<Bipartition> schmidt_spectra(const StateVector& state) {
  const int n = state.layout().n_qubits();
  std::vector<Bipartition> out;
  // Subsets containing qubit 0, excluding the full register.
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) - 1; mask += 2) {
    Bipartition b;
    std::vector<Factor> keep;
    for (int j = 0; j < n; ++j) {
      if ((mask >> j) & 1u) {
        b.part.push_back(j);
        keep.push_back(Factor::qubit(j));
      }
    }
    const Matrix rho = partial_trace(state, keep);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
      b.spectrum.push_back(std::max(0.0, es.eigenvalues()[i]));
    }
    out.push_back(std::move(b));
  }
  return out;
}

int schmidt_rank(const std::vector<double>& spectrum, double tol) {
  return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(), [tol](double w) { return w > tol; }));
}

GhzReport ghz_report(const StateVector& state, int n_qubits) {
  GhzReport r;
  r.n_qubits = n_qubits;
  r.even = n_qubits % 2 == 0;
  r.fidelity = ghz_fidelity(state, n_qubits);
  r.bipartitions = schmidt_spectra(state);
  const HilbertLayout& layout = state.layout();
  const std::uint64_t ones = (std::uint64_t{1} << n_qubits) - 1;
  int best = 0;
  for (int f = 1; f < layout.fock_cutoff(); ++f) {
    if (std::abs(state[layout.index(0, f)]) > std::abs(state[layout.index(0, best)])) best = f;
  }
  r.phase_zero = std::arg(state[layout.index(0, best)]);
  r.phase_one = std::arg(state[layout.index(ones, best)]);
  return r;
}

// ---------------------------------------------------------------------------

std::string CavityInit::label() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kFock: os << "fock:" << fock; break;
    case Kind::kCoherent: os << "coherent:" << amplitude.real() << (amplitude.imag() < 0 ? "" : "+") << amplitude.imag() << "i"; break;
    case Kind::kThermal: os << "thermal:" << mean_photons; break;
  }
  return os.str();
}

std::vector<std::pair<double, Vector>> CavityInit::components(int fock_cutoff) const {
  std::vector<std::pair<double, Vector>> out;
  switch (kind) {
    case Kind::kFock: {
      if (fock < 0 || fock >= fock_cutoff) throw ConfigError("cavity init: Fock level outside the cutoff");
      Vector v = Vector::Zero(fock_cutoff);
      v[fock] = 1.0;
      out.emplace_back(1.0, v);
      break;
    }
    case Kind::kCoherent:
      out.emplace_back(1.0, coherent_state(fock_cutoff, amplitude));
      break;
    case Kind::kThermal: {
      if (mean_photons < 0.0) throw ConfigError("cavity init: negative thermal occupation");
      const int top = std::max(1, fock_cutoff - 2);
      const double q = mean_photons / (1.0 + mean_photons);
      double norm = 0.0;
      std::vector<double> w(static_cast<std::size_t>(top));
      for (int n = 0; n < top; ++n) norm += w[static_cast<std::size_t>(n)] = std::pow(q, n);
      for (int n = 0; n < top; ++n) {
        const double p = w[static_cast<std::size_t>(n)] / norm;
        if (p < 1e-16) continue;
        Vector v = Vector::Zero(fock_cutoff);
        v[n] = 1.0;
        out.emplace_back(p, v);
      }
      break;
    }
  }
  return out;
}

InsensitivityReport cavity_insensitivity_scan(const GateSpec& gate, std::span<const CavityInit> inits,
                                              int fock_cutoff, std::uint64_t seed, int samples,
                                              double leak_threshold) {
  if (inits.empty()) throw ConfigError("cavity_insensitivity_scan: no cavity inits");
  if (samples < 1) throw ConfigError("cavity_insensitivity_scan: need at least one sample");
  if (!(gate.duration > 0.0)) throw ConfigError("cavity_insensitivity_scan: duration must be positive");
  const int n = gate.setup.device.n_qubits();
  const HilbertLayout layout(n, fock_cutoff);

  Matrix u;
  if (gate.kind == GateSpec::Kind::kTwoPulse) {
    u = run_schedule_sectorized(two_pulse_schedule(gate.setup.device, gate.setup.drive, gate.duration), layout,
                                gate.setup.numerics)
            .matrix();
  } else {
    const auto c = uniform_coupling(effective_couplings(gate.setup.device, gate.setup.drive));
    u = evolve_sectorized(c, layout, 0.0, gate.duration, gate.setup.numerics).matrix();
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vector> inputs;
  for (int s = 0; s < samples; ++s) {
    Vector v(layout.qubit_dim());
    for (auto& x : v) x = cplx(normal(rng), normal(rng));
    inputs.push_back(v / v.norm());
  }

  std::vector<Factor> qubits;
  for (int j = 0; j < n; ++j) qubits.push_back(Factor::qubit(j));

  InsensitivityReport report;
  report.fock_cutoff = fock_cutoff;
  // outputs[i][s]: qubit output of input s with cavity init i.
  std::vector<std::vector<Matrix>> outputs(inits.size());
  std::vector<double> tails(inits.size(), 0.0);
  for (std::size_t i = 0; i < inits.size(); ++i) {
    const auto comps = inits[i].components(fock_cutoff);
    for (const auto& in : inputs) {
      Matrix rho = Matrix::Zero(layout.qubit_dim(), layout.qubit_dim());
      for (const auto& [w, cav] : comps) {
        const StateVector out(layout, u * kron(in, cav));
        tails[i] = std::max(tails[i], leakage_guard(out, leak_threshold));
        rho += w * partial_trace(out, qubits);
      }
      outputs[i].push_back(std::move(rho));
    }
  }

  for (std::size_t i = 0; i < inits.size(); ++i) {
    InsensitivityRow row{inits[i].label(), 0.0, tails[i]};
    for (std::size_t j = 0; j < inits.size(); ++j) {
      for (int s = 0; s < samples; ++s) {
        const double d = trace_distance(outputs[i][static_cast<std::size_t>(s)], outputs[j][static_cast<std::size_t>(s)]);
        if (j == 0) row.deviation = std::max(row.deviation, d);
        report.max_pairwise = std::max(report.max_pairwise, d);
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace cavgeo
