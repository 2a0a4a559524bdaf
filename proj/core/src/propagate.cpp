#include "cavgeo/propagate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cavgeo/errors.hpp"

namespace cavgeo {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

void require_detuning(double detuning) {
  if (detuning == 0.0) {
    throw PhysicsGuardError("resonant_drive", "closed forms require a nonzero detuning delta");
  }
}

// Columns are the eigenvectors of sigma_axis with eigenvalue +1, -1.
Eigen::Matrix2cd axis_eigenbasis(Axis axis) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::kX: m << r, r, r, -r; break;
    case Axis::kY: m << r, r, kI * r, -kI * r; break;
    case Axis::kZ: m << 1, 0, 0, 1; break;
  }
  return m;
}

// Projectors of the qubit register onto the J_axis eigen-sectors, indexed by
// the number w of -1 eigenvalues (sector value m = N - 2w).
std::vector<Matrix> sector_projectors(Axis axis, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Matrix rot = Matrix::Identity(1, 1);
  for (int j = 0; j < n_qubits; ++j) rot = kron(rot, axis_eigenbasis(axis));
  std::vector<Matrix> out;
  for (int w = 0; w <= n_qubits; ++w) {
    Vector diag = Vector::Zero(dim);
    for (Eigen::Index word = 0; word < dim; ++word) {
      if (std::popcount(static_cast<std::uint64_t>(word)) == w) diag[word] = 1.0;
    }
    out.push_back(rot * diag.asDiagonal() * rot.adjoint());
  }
  return out;
}

Matrix displacement(int fock_cutoff, cplx beta) {
  const Matrix a = annihilation(fock_cutoff);
  return mat_exp(beta * a.adjoint() - std::conj(beta) * a);
}

Matrix cavity_drive(int fock_cutoff, double lambda, double detuning, double offset, double t) {
  const Matrix a = annihilation(fock_cutoff);
  const cplx phase = std::exp(kI * (detuning * t + offset));
  return lambda * (phase * a.adjoint() + std::conj(phase) * a);
}

void check_options(const EvolveOptions& opts) {
  if (!(opts.tol >= 1e-13 && opts.tol <= 1e-6)) {
    throw ConfigError("evolve_numeric: tol must lie in [1e-13, 1e-6]");
  }
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// exp(-i dt K); Hermitian K goes through the eigensolver, which is about
// twice as fast as Pade at the sizes used here.
Matrix exp_step(const Matrix& k, double dt) {
  if ((k - k.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, max_abs(k))) return expm_hermitian(k, dt);
  return mat_exp((-kI * dt) * k);
}

}  // namespace

Matrix cf4_step(const HamiltonianFn& h, double t, double dt) {
  const double c1 = 0.5 - kSqrt3 / 6.0;
  const double c2 = 0.5 + kSqrt3 / 6.0;
  const double a1 = 0.25 + kSqrt3 / 6.0;
  const double a2 = 0.25 - kSqrt3 / 6.0;
  const Matrix h1 = h(t + c1 * dt);
  const Matrix h2 = h(t + c2 * dt);
  return exp_step(a2 * h1 + a1 * h2, dt) * exp_step(a1 * h1 + a2 * h2, dt);
}

Matrix cf4_apply(const HamiltonianFn& h, double t, double dt, const Matrix& block) {
  const double c1 = 0.5 - kSqrt3 / 6.0;
  const double c2 = 0.5 + kSqrt3 / 6.0;
  const double a1 = 0.25 + kSqrt3 / 6.0;
  const double a2 = 0.25 - kSqrt3 / 6.0;
  const Matrix h1 = h(t + c1 * dt);
  const Matrix h2 = h(t + c2 * dt);
  const Matrix first = expm_action((-kI * dt) * (a1 * h1 + a2 * h2), block);
  return expm_action((-kI * dt) * (a2 * h1 + a1 * h2), first);
}

std::vector<Matrix> evolve_numeric_at(const HamiltonianFn& h, double t0, std::span<const double> times,
                                      const EvolveOptions& opts) {
  check_options(opts);
  if (times.empty()) return {};
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  const double t_end = times[order.back()];
  if (!(times[order.front()] > t0)) throw ConfigError("evolve_numeric: requires t1 > t0");
  const double span_total = t_end - t0;

  const Eigen::Index n = h(t0).rows();
  Matrix u = Matrix::Identity(n, n);
  double t = t0;
  double dt = opts.initial_step > 0.0 ? opts.initial_step : span_total / 16.0;
  const double min_step = 1e-13 * span_total;
  std::vector<Matrix> out(times.size());
  std::size_t next = 0;
  int rejections = 0;

  while (next < order.size()) {
    const double target = times[order[next]];
    if (t >= target) {
      out[order[next++]] = u;
      continue;
    }
    const double step = std::min(dt, target - t);
    const Matrix whole = cf4_step(h, t, step);
    const Matrix halves = cf4_step(h, t + step / 2.0, step / 2.0) * cf4_step(h, t, step / 2.0);
    const double err = max_abs(whole - halves) / 15.0;
    const double allowed = opts.tol * step / span_total;
    const double factor = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.25) : 2.0;
    if (err <= allowed) {
      u = halves * u;
      t = (target - t - step <= 1e-15 * span_total) ? target : t + step;
      rejections = 0;
      if (step == dt) dt = step * std::clamp(factor, 0.2, 2.0);
    } else {
      dt = step * std::clamp(factor, 0.1, 0.9);
      if (++rejections > opts.max_rejections || dt < min_step) {
        std::ostringstream os;
        os << "evolve_numeric: tolerance " << opts.tol << " not met at t=" << t << " (step " << dt << ")";
        throw ConvergenceError(os.str());
      }
    }
  }
  return out;
}

std::vector<Matrix> evolve_columns_at(const HamiltonianFn& h, const Matrix& block, double t0,
                                      std::span<const double> times, const EvolveOptions& opts) {
  check_options(opts);
  if (times.empty()) return {};
  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
  if (!(times[order.front()] > t0)) throw ConfigError("evolve_columns: requires t1 > t0");
  const double span_total = times[order.back()] - t0;
  const double min_step = 1e-13 * span_total;
  const double scale = std::max(block.colwise().norm().maxCoeff(), 1e-300);
  Matrix psi = block;
  double t = t0;
  double dt = opts.initial_step > 0.0 ? opts.initial_step : span_total / 16.0;
  std::vector<Matrix> out(times.size());
  std::size_t next = 0;
  int rejections = 0;
  while (next < order.size()) {
    const double target = times[order[next]];
    if (t >= target) {
      out[order[next++]] = psi;
      continue;
    }
    const double step = std::min(dt, target - t);
    const Matrix whole = cf4_apply(h, t, step, psi);
    const Matrix halves = cf4_apply(h, t + step / 2.0, step / 2.0, cf4_apply(h, t, step / 2.0, psi));
    const double err = max_abs(whole - halves) / (15.0 * scale);
    const double allowed = opts.tol * step / span_total;
    const double factor = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.25) : 2.0;
    if (err <= allowed) {
      psi = halves;
      t = (target - t - step <= 1e-15 * span_total) ? target : t + step;
      rejections = 0;
      if (step == dt) dt = step * std::clamp(factor, 0.2, 2.0);
    } else {
      dt = step * std::clamp(factor, 0.1, 0.9);
      if (++rejections > opts.max_rejections || dt < min_step) {
        std::ostringstream os;
        os << "evolve_columns: tolerance " << opts.tol << " not met at t=" << t << " (step " << dt << ")";
        throw ConvergenceError(os.str());
      }
    }
  }
  return out;
}

Vector evolve_state(const HamiltonianFn& h, const Vector& psi0, double t0, double t1, const EvolveOptions& opts) {
  if (!(t1 > t0)) throw ConfigError("evolve_state: requires t1 > t0");
  const double times[] = {t1};
  return evolve_columns_at(h, Matrix(psi0), t0, times, opts).front().col(0);
}

Matrix evolve_numeric(const HamiltonianFn& h, double t0, double t1, const EvolveOptions& opts) {
  const double times[] = {t1};
  return std::move(evolve_numeric_at(h, t0, times, opts).front());
}

OperatorMatrix evolve_numeric(const HamiltonianFn& h, const HilbertLayout& layout, double t0, double t1,
                              const EvolveOptions& opts) {
  return {layout, evolve_numeric(h, t0, t1, opts)};
}

cplx alpha(double lambda, double detuning, double offset, double t) {
  require_detuning(detuning);
  return (lambda / detuning) * (1.0 - std::exp(kI * (detuning * t))) * std::exp(kI * offset);
}

double gamma(double lambda, double detuning, double t) {
  require_detuning(detuning);
  const double r = lambda / detuning;
  return r * r * (detuning * t - std::sin(detuning * t));
}

double closure_time(double detuning, int m) {
  require_detuning(detuning);
  if (m < 1) throw ConfigError("closure_time: loop index m must be >= 1");
  return 2.0 * m * units::kPi / detuning;
}

EffectiveCoupling uniform_coupling(std::span<const EffectiveCoupling> couplings) {
  if (couplings.empty()) throw ConfigError("uniform_coupling: no couplings");
  const auto& c0 = couplings.front();
  for (const auto& c : couplings) {
    if (!same_coupling(c, c0)) {
      throw PhysicsGuardError("nonuniform_params", "closed-form collective propagator needs uniform parameters");
    }
  }
  return c0;
}

bool same_coupling(const EffectiveCoupling& a, const EffectiveCoupling& b) {
  return a.lambda == b.lambda && a.detuning == b.detuning && a.offset == b.offset && a.axis == b.axis;
}

OperatorMatrix u_analytic(const EffectiveCoupling& drive, const HilbertLayout& layout, double t) {
  const double g = gamma(drive.lambda, drive.detuning, t);
  const cplx a = alpha(drive.lambda, drive.detuning, drive.offset, t);
  const int n = layout.n_qubits();
  const auto projectors = sector_projectors(drive.axis, n);
  Matrix u = Matrix::Zero(layout.dim(), layout.dim());
  for (int w = 0; w <= n; ++w) {
    const double m = n - 2.0 * w;
    const Matrix cav = std::exp(kI * (g * m * m)) * displacement(layout.fock_cutoff(), a * m);
    u += kron(projectors[static_cast<std::size_t>(w)], cav);
  }
  return {layout, std::move(u)};
}

OperatorMatrix u_analytic(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                          double t) {
  const auto couplings = effective_couplings(dev, drive);
  if (static_cast<int>(couplings.size()) != layout.n_qubits()) throw ConfigError("u_analytic: qubit count mismatch");
  return u_analytic(uniform_coupling(couplings), layout, t);
}

Matrix collective_phase_gate(double gamma_angle, Axis axis, int n_qubits) {
  const auto projectors = sector_projectors(axis, n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Matrix u = Matrix::Zero(dim, dim);
  for (int w = 0; w <= n_qubits; ++w) {
    const double m = n_qubits - 2.0 * w;
    u += std::exp(kI * (gamma_angle * m * m)) * projectors[static_cast<std::size_t>(w)];
  }
  return u;
}

OperatorMatrix u_closed(double gamma_angle, Axis axis, const HilbertLayout& layout) {
  const int d = layout.fock_cutoff();
  const Matrix q = collective_phase_gate(gamma_angle, axis, layout.n_qubits());
  return {layout, d == 1 ? q : kron(q, Matrix::Identity(d, d))};
}

OperatorMatrix evolve_sectorized(const EffectiveCoupling& drive, const HilbertLayout& layout, double t0,
                                 double t1, const EvolveOptions& opts) {
  const int n = layout.n_qubits();
  const int d = layout.fock_cutoff();
  const auto projectors = sector_projectors(drive.axis, n);
  Matrix u = Matrix::Zero(layout.dim(), layout.dim());
  for (int w = 0; w <= n; ++w) {
    const double m = n - 2.0 * w;
    Matrix cav;
    if (m == 0.0) {
      cav = Matrix::Identity(d, d);
    } else {
      const HamiltonianFn h = [&](double t) { return cavity_drive(d, drive.lambda * m, drive.detuning, drive.offset, t); };
      cav = evolve_numeric(h, t0, t1, opts);
    }
    u += kron(projectors[static_cast<std::size_t>(w)], cav);
  }
  return {layout, std::move(u)};
}

// ---------------------------------------------------------------------------
// Schedules

Matrix PulseSegment::hamiltonian(const HilbertLayout& layout, double local_t) const {
  switch (kind) {
    case HamiltonianKind::kEffective: {
      const auto couplings = effective_couplings(device, drive);
      return h_eff(couplings, layout, local_t);
    }
    case HamiltonianKind::kLab:
      return h_lab_interaction_picture(device, drive, layout, local_t);
    case HamiltonianKind::kCarrier: {
      if (drive.mode != DriveMode::kStatic) {
        throw PhysicsGuardError("ramped_carrier", "carrier segments need a static flux drive");
      }
      // Carrier mode: phi^- selects the axis per qubit; evaluate each qubit's
      // static term with its own phi^-.
      Matrix h = Matrix::Zero(layout.dim(), layout.dim());
      for (int j = 0; j < layout.n_qubits(); ++j) {
        const auto& q = drive.qubits.at(static_cast<std::size_t>(j));
        const cplx rate = carrier_rate(device.qubits.at(static_cast<std::size_t>(j)), q.phi_plus, q.phi_minus);
        Matrix s = Matrix::Zero(2, 2);
        s(1, 0) = rate * std::exp(kI * (q.phi_minus / 2.0));
        s += s.adjoint().eval();
        h += tensor_embed(s, Factor::qubit(j), layout).matrix();
      }
      return h;
    }
  }
  throw ConfigError("unknown Hamiltonian kind");
}

double PulseSchedule::total_duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

namespace {

void check_schedule(const PulseSchedule& schedule) {
  if (schedule.segments.empty()) throw ConfigError("pulse schedule is empty");
  for (const auto& s : schedule.segments) {
    if (!(s.duration > 0.0) || !std::isfinite(s.duration)) {
      throw ConfigError("pulse segment duration must be positive and finite");
    }
  }
}

}  // namespace

OperatorMatrix run_schedule(const PulseSchedule& schedule, const HilbertLayout& layout,
                            const EvolveOptions& opts) {
  check_schedule(schedule);
  Matrix u = Matrix::Identity(layout.dim(), layout.dim());
  for (const auto& seg : schedule.segments) {
    const HamiltonianFn h = [&](double t) { return seg.hamiltonian(layout, t); };
    u = evolve_numeric(h, 0.0, seg.duration, opts) * u;
  }
  return {layout, std::move(u)};
}

OperatorMatrix run_schedule_sectorized(const PulseSchedule& schedule, const HilbertLayout& layout,
                                       const EvolveOptions& opts) {
  check_schedule(schedule);
  std::vector<EffectiveCoupling> drives;
  for (const auto& seg : schedule.segments) {
    if (seg.kind != HamiltonianKind::kEffective) {
      throw ConfigError("sectorized schedules accept effective segments only");
    }
    drives.push_back(uniform_coupling(effective_couplings(seg.device, seg.drive)));
    if (drives.back().axis != drives.front().axis) throw ConfigError("sectorized schedule mixes axes");
  }
  const int n = layout.n_qubits();
  const int d = layout.fock_cutoff();
  const auto projectors = sector_projectors(drives.front().axis, n);
  Matrix u = Matrix::Zero(layout.dim(), layout.dim());
  for (int w = 0; w <= n; ++w) {
    const double m = n - 2.0 * w;
    Matrix cav = Matrix::Identity(d, d);
    if (m != 0.0) {
      for (std::size_t k = 0; k < drives.size(); ++k) {
        const auto& c = drives[k];
        const HamiltonianFn h = [&](double t) { return cavity_drive(d, c.lambda * m, c.detuning, c.offset, t); };
        cav = evolve_numeric(h, 0.0, schedule.segments[k].duration, opts) * cav;
      }
    }
    u += kron(projectors[static_cast<std::size_t>(w)], cav);
  }
  return {layout, std::move(u)};
}

PulseSchedule two_pulse_schedule(const DeviceParams& dev, const DriveParams& drive, double tau) {
  if (!(tau > 0.0)) throw ConfigError("two_pulse: tau must be positive");
  PulseSchedule s;
  PulseSegment first{tau / 2.0, dev, drive, HamiltonianKind::kEffective};
  PulseSegment second = first;
  for (auto& q : second.drive.qubits) q.offset += units::kPi;
  s.segments = {first, second};
  const auto c = uniform_coupling(effective_couplings(dev, drive));
  const double g2 = 2.0 * gamma(c.lambda, c.detuning, tau / 2.0);
  s.expected = u_closed(g2, c.axis, HilbertLayout(dev.n_qubits(), 1));
  return s;
}

OperatorMatrix two_pulse(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                         double tau, const EvolveOptions& opts) {
  return run_schedule(two_pulse_schedule(dev, drive, tau), layout, opts);
}

double rwa_fidelity(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout, double t,
                    const EvolveOptions& opts) {
  const auto rwa = rwa_effective_couplings(dev, drive);
  const LabFrame frame(dev, drive, layout);
  const HamiltonianFn lab = [&](double s) { return frame.interaction_picture(s); };
  const HamiltonianFn eff = [&](double s) { return h_eff(rwa, layout, s); };
  const Vector start = StateVector::basis(layout, 0, 0).amplitudes();
  const Vector a = evolve_state(lab, start, 0.0, t, opts);
  const Vector b = evolve_state(eff, start, 0.0, t, opts);
  return fidelity(a, b);
}

double two_pulse_duration(double lambda, double detuning, double target_gamma) {
  require_detuning(detuning);
  if (!(target_gamma > 0.0)) throw ConfigError("two_pulse_duration: target must be positive");
  // 2 gamma(tau/2) is nondecreasing in tau; bracket and bisect.
  const auto f = [&](double tau) { return 2.0 * gamma(lambda, detuning, tau / 2.0) - target_gamma; };
  double lo = 0.0, hi = 1.0 / std::abs(detuning);
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw PhysicsGuardError("unreachable_phase", "two_pulse_duration: target phase not reachable");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Inhomogeneous pair

double gamma_jl(const EffectiveCoupling& cj, const EffectiveCoupling& cl, double t) {
  if (same_coupling(cj, cl)) return gamma(cj.lambda, cj.detuning, t);
  require_detuning(cj.detuning);
  require_detuning(cl.detuning);
  const double d = cj.detuning - cl.detuning;
  if (d == 0.0) {
    throw PhysicsGuardError("equal_detuning", "gamma_jl closed form needs distinct detunings (use u_analytic)");
  }
  const double b = cj.offset - cl.offset;
  const double dj = cj.detuning, dl = cl.detuning;
  return cj.lambda * cl.lambda / (d * dj * dl) *
         (dj * std::sin(d * t + b) - d * std::sin(dj * t + b) - dl * std::sin(b));
}

OperatorMatrix u_inhomog(const std::array<ResonantQubit, 2>& pair, const HilbertLayout& layout, double t) {
  const auto& [p, q] = pair;
  if (p.qubit == q.qubit) throw ConfigError("u_inhomog: the two resonant qubits must differ");
  if (p.coupling.axis != q.coupling.axis) throw ConfigError("u_inhomog: both qubits must share the axis");
  if (p.coupling.detuning == q.coupling.detuning) {
    throw PhysicsGuardError("equal_detuning", "u_inhomog closed form needs d_jl != 0 (use u_analytic)");
  }
  const double diag = gamma_jl(p.coupling, p.coupling, t) + gamma_jl(q.coupling, q.coupling, t);
  const double cross = gamma_jl(p.coupling, q.coupling, t) + gamma_jl(q.coupling, p.coupling, t);
  const cplx ap = alpha(p.coupling.lambda, p.coupling.detuning, p.coupling.offset, t);
  const cplx aq = alpha(q.coupling.lambda, q.coupling.detuning, q.coupling.offset, t);

  const Eigen::Matrix2cd basis = axis_eigenbasis(p.coupling.axis);
  const HilbertLayout qubits_only = layout.with_cutoff(1);
  Matrix u = Matrix::Zero(layout.dim(), layout.dim());
  for (int sp = 0; sp < 2; ++sp) {
    for (int sq = 0; sq < 2; ++sq) {
      const double ep = sp == 0 ? 1.0 : -1.0;
      const double eq = sq == 0 ? 1.0 : -1.0;
      const Matrix proj_p = basis.col(sp) * basis.col(sp).adjoint();
      const Matrix proj_q = basis.col(sq) * basis.col(sq).adjoint();
      const int pq[] = {p.qubit, q.qubit};
      const Matrix proj = embed_qubits(kron(proj_p, proj_q), pq, qubits_only);
      const Matrix cav =
          std::exp(kI * (diag + cross * ep * eq)) * displacement(layout.fock_cutoff(), ap * ep + aq * eq);
      u += kron(proj, cav);
    }
  }
  return {layout, std::move(u)};
}

// ---------------------------------------------------------------------------

Matrix fock_range_block(const HilbertLayout& layout, int n_max) {
  n_max = std::min(n_max, layout.fock_cutoff() - 1);
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < layout.dim(); ++i) {
    if (layout.decode(i).second <= n_max) rows.push_back(i);
  }
  Matrix p = Matrix::Zero(layout.dim(), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) p(rows[k], static_cast<Eigen::Index>(k)) = 1.0;
  return p;
}

double fock_range_fidelity(const Matrix& u, const Matrix& v, const HilbertLayout& layout, int n_max) {
  if (u.rows() != layout.dim() || v.rows() != layout.dim()) throw ConfigError("fock_range_fidelity: shape mismatch");
  n_max = std::min(n_max, layout.fock_cutoff() - 1);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < layout.dim(); ++i) {
    if (layout.decode(i).second <= n_max) cols.push_back(i);
  }
  cplx tr = 0.0;
  for (Eigen::Index c : cols) tr += u.col(c).dot(v.col(c));
  return std::abs(tr) / static_cast<double>(cols.size());
}

double fock_tail_population(const StateVector& state) {
  const HilbertLayout& layout = state.layout();
  const int d = layout.fock_cutoff();
  if (d < 3) return 0.0;
  double pop = 0.0;
  for (Eigen::Index i = 0; i < layout.dim(); ++i) {
    if (layout.decode(i).second >= d - 2) pop += std::norm(state[i]);
  }
  return pop;
}

double leakage_guard(const StateVector& state, double threshold) {
  const double pop = fock_tail_population(state);
  if (pop > threshold) {
    std::ostringstream os;
    os << "Fock truncation unsafe: top-two-level population " << pop << " exceeds " << threshold
       << " at cutoff D=" << state.layout().fock_cutoff() << "; rerun with a larger cutoff";
    throw LeakageError(pop, os.str());
  }
  return pop;
}

Vector coherent_state(int fock_cutoff, cplx alpha_value) {
  Vector v(fock_cutoff);
  cplx term = 1.0;
  for (int n = 0; n < fock_cutoff; ++n) {
    if (n > 0) term *= alpha_value / std::sqrt(static_cast<double>(n));
    v[n] = term;
  }
  return v / v.norm();
}

}  // namespace cavgeo
