#pragma once

#include "cavgeo/model.hpp"
#include "cavgeo/propagate.hpp"

namespace cavgeo {

struct PhaseAudit {
  int m = 0;               ///< J eigenvalue of the sector
  int loops = 0;           ///< closure index of t
  double total = 0.0;      ///< arg <Psi(0)|Psi(t)>, unwrapped along the path
  double dynamic = 0.0;    ///< -int <H> ds
  double geometric = 0.0;  ///< total - dynamic
  double area = 0.0;       ///< -Im closed-integral alpha^* d alpha
};

struct PhaseAuditOptions {
  int steps_per_loop = 1024;
  int fock_cutoff = 0;  ///< 0 sizes the cutoff from the largest displacement
  double leak_threshold = 1e-10;
};

/// Closure index k with t = 2 k pi / delta; throws PhysicsGuardError
/// ("open_loop") if t is not a closure time.
int closure_index(double detuning, double t);

/// Forced-oscillator evolution of sector m from cavity vacuum under
/// lambda m (a^dag e^{i(delta s + beta)} + h.c.), with the phase split into
/// dynamic and geometric parts. The sector problem depends on m only through
/// lambda m, so any integer m is accepted.
PhaseAudit phase_decompose(const DeviceParams& dev, const DriveParams& drive, int m, double t,
                           const PhaseAuditOptions& opts = {});
PhaseAudit phase_decompose(const EffectiveCoupling& coupling, int m, double t, const PhaseAuditOptions& opts = {});

/// -Im closed-integral alpha^* d alpha along alpha_m(s) = <a>(s).
double loop_area(const DeviceParams& dev, const DriveParams& drive, int m, double t,
                 const PhaseAuditOptions& opts = {});
double loop_area(const EffectiveCoupling& coupling, int m, double t, const PhaseAuditOptions& opts = {});

/// Maps a phase to (-pi, pi].
double wrap_phase(double phase);

}  // namespace cavgeo
