#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "cavgeo/model.hpp"
#include "cavgeo/qspace.hpp"

namespace cavgeo {

using HamiltonianFn = std::function<Matrix(double)>;

struct EvolveOptions {
  double tol = 1e-10;      ///< global error target, in [1e-13, 1e-6]
  int max_rejections = 60; ///< consecutive step rejections before giving up
  double initial_step = 0.0;  ///< 0 picks (t1 - t0) / 16
};

/// One step of the fourth-order commutator-free Magnus integrator (two
/// exponentials, Gauss-Legendre nodes).
Matrix cf4_step(const HamiltonianFn& h, double t, double dt);

/// The same step applied to a block of column states with expm_action.
Matrix cf4_apply(const HamiltonianFn& h, double t, double dt, const Matrix& block);

/// Propagator of i dU/dt = H(t) U from t0 to t1 with adaptive step halving.
/// Throws ConvergenceError when the tolerance cannot be met.
Matrix evolve_numeric(const HamiltonianFn& h, double t0, double t1, const EvolveOptions& opts = {});

/// psi(t1) for i d psi/dt = H(t) psi. Steps are controlled on the state
/// only, so unpopulated fast components do not force small steps.
Vector evolve_state(const HamiltonianFn& h, const Vector& psi0, double t0, double t1, const EvolveOptions& opts = {});

/// U(t, t0) B for a block of columns B at each of `times`, with the step
/// control of evolve_state applied to the whole block. With B the columns
/// of a subspace projector this is the propagator restricted to it.
std::vector<Matrix> evolve_columns_at(const HamiltonianFn& h, const Matrix& block, double t0,
                                      std::span<const double> times, const EvolveOptions& opts = {});

/// Propagators from t0 to each of `times` (any order, all > t0) in one sweep.
std::vector<Matrix> evolve_numeric_at(const HamiltonianFn& h, double t0, std::span<const double> times,
                                      const EvolveOptions& opts = {});

OperatorMatrix evolve_numeric(const HamiltonianFn& h, const HilbertLayout& layout, double t0, double t1,
                              const EvolveOptions& opts = {});

/// alpha(t) = (lambda/delta)(1 - e^{i delta t}) e^{i beta}; throws for delta = 0.
cplx alpha(double lambda, double detuning, double offset, double t);
/// gamma(t) = (lambda/delta)^2 (delta t - sin delta t); throws for delta = 0.
double gamma(double lambda, double detuning, double t);
/// t_m = 2 m pi / delta, m >= 1.
double closure_time(double detuning, int m);

/// Collective-gate angle for a Molmer-Sorensen angle theta, where the MS gate
/// is exp(-i theta (J/2)^2) with J the Pauli sum. exp(i gamma J^2) with
/// gamma = ms_gamma(pi/2) maps |0...0> to the standard GHZ state.
constexpr double ms_gamma(double theta) { return -theta / 4.0; }

/// Returns the common coupling; throws PhysicsGuardError if the couplings differ.
EffectiveCoupling uniform_coupling(std::span<const EffectiveCoupling> couplings);

/// exp(i gamma J^2) exp[(alpha a^dag - alpha^* a) J] for a uniform drive.
OperatorMatrix u_analytic(const EffectiveCoupling& drive, const HilbertLayout& layout, double t);
OperatorMatrix u_analytic(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                          double t);

/// exp(i gamma J_axis^2) on the qubit register (2^N x 2^N).
Matrix collective_phase_gate(double gamma, Axis axis, int n_qubits);
/// exp(i gamma J_axis^2) tensor identity on the cavity.
OperatorMatrix u_closed(double gamma, Axis axis, const HilbertLayout& layout);

/// Exact propagator of a uniform effective drive assembled from the J_axis
/// eigen-sectors, each sector's cavity evolution integrated numerically.
OperatorMatrix evolve_sectorized(const EffectiveCoupling& drive, const HilbertLayout& layout, double t0,
                                 double t1, const EvolveOptions& opts = {});

enum class HamiltonianKind { kLab, kEffective, kCarrier };

/// One drive segment. Segment Hamiltonians are evaluated at segment-local
/// time (the flux ramps restart at the segment start), so beta^0 is the
/// phase offset at the start of the segment.
struct PulseSegment {
  double duration = 0.0;
  DeviceParams device;
  DriveParams drive;
  HamiltonianKind kind = HamiltonianKind::kEffective;

  /// Lab segments use the interaction picture of H_0.
  Matrix hamiltonian(const HilbertLayout& layout, double local_t) const;
};

struct PulseSchedule {
  std::vector<PulseSegment> segments;
  std::optional<OperatorMatrix> expected;

  double total_duration() const;
};

/// Numeric propagator of the whole schedule (first segment acts first).
OperatorMatrix run_schedule(const PulseSchedule& schedule, const HilbertLayout& layout,
                            const EvolveOptions& opts = {});
/// Same for schedules of uniform effective segments sharing one axis, using
/// the sector decomposition (cost independent of 2^N beyond bookkeeping).
OperatorMatrix run_schedule_sectorized(const PulseSchedule& schedule, const HilbertLayout& layout,
                                       const EvolveOptions& opts = {});

/// beta^0 for tau/2, then beta^0 + pi for tau/2.
PulseSchedule two_pulse_schedule(const DeviceParams& dev, const DriveParams& drive, double tau);
OperatorMatrix two_pulse(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                         double tau, const EvolveOptions& opts = {});
/// Shortest tau with 2 gamma(tau/2) = target (target > 0).
double two_pulse_duration(double lambda, double detuning, double target_gamma);

/// |<psi_rwa|psi_lab>|^2 for |0...0>|0> evolved over [0, t] by the lab-frame
/// interaction (interaction picture of H_0) and by h_eff with the
/// rotating-wave couplings of rwa_effective_couplings.
double rwa_fidelity(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout, double t,
                    const EvolveOptions& opts = {});

struct ResonantQubit {
  int qubit = 0;
  EffectiveCoupling coupling;
};

/// Ordered-pair coefficient gamma_jl(t) of sigma_j sigma_l; for j == l pass
/// the same coupling twice. Throws PhysicsGuardError for distinct couplings
/// with equal detunings.
double gamma_jl(const EffectiveCoupling& cj, const EffectiveCoupling& cl, double t);
bool same_coupling(const EffectiveCoupling& a, const EffectiveCoupling& b);

/// Closed-form two-resonant-qubit propagator; other qubits are idle.
OperatorMatrix u_inhomog(const std::array<ResonantQubit, 2>& pair, const HilbertLayout& layout, double t);

/// Agreement of two operators restricted to cavity Fock states n <= n_max:
/// |tr(P U^dag V P)| / tr(P). Used where truncation at the top Fock levels
/// makes whole-space comparisons meaningless.
double fock_range_fidelity(const Matrix& u, const Matrix& v, const HilbertLayout& layout, int n_max);
/// Basis columns with Fock index <= n_max (the P above as an isometry).
Matrix fock_range_block(const HilbertLayout& layout, int n_max);

/// Population in the top two Fock levels (0 for cutoffs below 3).
double fock_tail_population(const StateVector& state);
/// Returns fock_tail_population; throws LeakageError above `threshold`.
double leakage_guard(const StateVector& state, double threshold = 1e-8);

/// Truncated coherent state (Poisson amplitudes, renormalized).
Vector coherent_state(int fock_cutoff, cplx alpha);

}  // namespace cavgeo
