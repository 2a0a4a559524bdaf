#include "cavgeo/geomphase.hpp"

#include <cmath>
#include <sstream>

#include "cavgeo/errors.hpp"

namespace cavgeo {

namespace {

constexpr double kPi = units::kPi;

struct Trajectory {
  std::vector<Vector> states;  // on the uniform grid s_k = k dt
  std::vector<double> energy;  // <H>(s_k)
  std::vector<cplx> label;     // <a>(s_k)
  std::vector<cplx> velocity;  // d<a>/ds (s_k)
  double dt = 0.0;
};

int auto_cutoff(double max_displacement) {
  const double n = max_displacement * max_displacement;
  return std::max(20, static_cast<int>(std::ceil(n + 10.0 * std::sqrt(n) + 15.0)));
}

Trajectory sector_trajectory(const EffectiveCoupling& c, int m, double t, const PhaseAuditOptions& opts) {
  if (opts.steps_per_loop < 16) throw ConfigError("phase audit: steps_per_loop must be at least 16");
  const int loops = closure_index(c.detuning, t);
  const double amp = c.lambda * m;
  const int d = opts.fock_cutoff > 0 ? opts.fock_cutoff : auto_cutoff(2.0 * std::abs(amp / c.detuning));
  const Matrix a = annihilation(d);
  const Matrix adag = a.adjoint();
  const HamiltonianFn h = [&](double s) {
    const cplx e = std::exp(kI * (c.detuning * s + c.offset));
    return Matrix(amp * (e * adag + std::conj(e) * a));
  };

  Trajectory tr;
  const int steps = loops * opts.steps_per_loop;
  tr.dt = t / steps;
  Vector psi = Vector::Zero(d);
  psi[0] = 1.0;
  const Matrix comm = a * adag - adag * a;
  for (int k = 0; k <= steps; ++k) {
    const double s = k * tr.dt;
    if (k > 0) psi = cf4_step(h, s - tr.dt, tr.dt) * psi;
    const Matrix hs = h(s);
    tr.energy.push_back(psi.dot(hs * psi).real());
    tr.label.push_back(psi.dot(a * psi));
    // i d<a>/ds = <[a, H]> = amp e^{i(delta s + beta)} <[a, a^dag]>
    tr.velocity.push_back(-kI * amp * std::exp(kI * (c.detuning * s + c.offset)) * psi.dot(comm * psi));
    tr.states.push_back(psi);
  }
  const double tail = std::norm(psi[d - 1]) + std::norm(psi[d - 2]);
  if (tail > opts.leak_threshold) {
    std::ostringstream os;
    os << "phase audit: top-two-level population " << tail << " at cutoff D=" << d;
    throw LeakageError(tail, os.str());
  }
  return tr;
}

// Trapezoid rule; the integrands are periodic over whole loops, where it
// converges spectrally.
template <class T>
T trapezoid(const std::vector<T>& f, double dt) {
  T sum = 0.5 * (f.front() + f.back());
  for (std::size_t k = 1; k + 1 < f.size(); ++k) sum += f[k];
  return sum * dt;
}

}  // namespace

int closure_index(double detuning, double t) {
  if (detuning == 0.0) throw PhysicsGuardError("resonant_drive", "closure requires a nonzero detuning");
  const double period = 2.0 * kPi / std::abs(detuning);
  const double k = t / period;
  const double rounded = std::round(k);
  if (rounded < 1.0 || std::abs(k - rounded) > 1e-9 * std::max(1.0, rounded)) {
    std::ostringstream os;
    os << "t=" << t << " is not a closure time 2k pi/|delta| (k=" << k << "); the loop is open";
    throw PhysicsGuardError("open_loop", os.str());
  }
  return static_cast<int>(rounded);
}

double wrap_phase(double phase) {
  double w = std::remainder(phase, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

PhaseAudit phase_decompose(const EffectiveCoupling& c, int m, double t, const PhaseAuditOptions& opts) {
  PhaseAudit out;
  out.m = m;
  out.loops = closure_index(c.detuning, t);
  if (m == 0) return out;
  const Trajectory tr = sector_trajectory(c, m, t, opts);

  // Continuity-tracked arg <Psi(0)|Psi(s)>.
  double total = 0.0;
  double prev = 0.0;
  for (const auto& psi : tr.states) {
    const double now = std::arg(psi[0]);
    total += wrap_phase(now - prev);
    prev = now;
  }
  out.total = total;
  out.dynamic = -trapezoid(tr.energy, tr.dt);
  out.geometric = out.total - out.dynamic;

  std::vector<cplx> integrand;
  integrand.reserve(tr.label.size());
  for (std::size_t k = 0; k < tr.label.size(); ++k) integrand.push_back(std::conj(tr.label[k]) * tr.velocity[k]);
  out.area = -trapezoid(integrand, tr.dt).imag();
  return out;
}

PhaseAudit phase_decompose(const DeviceParams& dev, const DriveParams& drive, int m, double t,
                           const PhaseAuditOptions& opts) {
  return phase_decompose(uniform_coupling(effective_couplings(dev, drive)), m, t, opts);
}

double loop_area(const EffectiveCoupling& c, int m, double t, const PhaseAuditOptions& opts) {
  return phase_decompose(c, m, t, opts).area;
}

double loop_area(const DeviceParams& dev, const DriveParams& drive, int m, double t, const PhaseAuditOptions& opts) {
  return phase_decompose(dev, drive, m, t, opts).area;
}

}  // namespace cavgeo
