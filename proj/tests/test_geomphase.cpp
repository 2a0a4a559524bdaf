#include <gtest/gtest.h>

#include <cmath>

#include "cavgeo/entangle.hpp"
#include "cavgeo/errors.hpp"
#include "cavgeo/geomphase.hpp"
#include "test_util.hpp"

namespace cavgeo {
namespace {

constexpr double kPi = units::kPi;

EffectiveCoupling coupling(double beta = 0.4) {
  EffectiveCoupling c;
  c.lambda = 0.3;
  c.detuning = 1.5;
  c.offset = beta;
  return c;
}

// -Im closed-integral alpha^* d alpha on the free forced-oscillator label,
// alpha(s) = -(lambda m / delta)(e^{i(delta s + beta)} - e^{i beta}), by a
// midpoint sum on the polygon.
double area_oracle(const EffectiveCoupling& c, int m, double t) {
  const double r = c.lambda * m / c.detuning;
  auto alpha = [&](double s) { return -r * (std::exp(kI * (c.detuning * s + c.offset)) - std::exp(kI * c.offset)); };
  const int steps = 200000;
  double sum = 0.0;
  for (int k = 0; k < steps; ++k) {
    const cplx a0 = alpha(t * k / steps);
    const cplx a1 = alpha(t * (k + 1) / steps);
    sum += (std::conj(0.5 * (a0 + a1)) * (a1 - a0)).imag();
  }
  return -sum;
}

TEST(ClosureIndex, AcceptsClosureTimesOnly) {
  EXPECT_EQ(closure_index(1.5, closure_time(1.5, 3)), 3);
  EXPECT_EQ(closure_index(-1.5, closure_time(1.5, 1)), 1);
  EXPECT_THROW(closure_index(1.5, 0.5 * closure_time(1.5, 1)), PhysicsGuardError);
  EXPECT_THROW(closure_index(1.5, 0.0), PhysicsGuardError);
  EXPECT_THROW(closure_index(0.0, 1.0), PhysicsGuardError);
}

TEST(WrapPhase, Range) {
  EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_phase(-kPi), kPi);
  EXPECT_NEAR(wrap_phase(3 * kPi / 2), -kPi / 2, 1e-15);
}

TEST(PhaseAudit, NullSector) {
  const auto c = coupling();
  const PhaseAudit p = phase_decompose(c, 0, closure_time(c.detuning, 1));
  EXPECT_EQ(p.total, 0.0);
  EXPECT_EQ(p.dynamic, 0.0);
  EXPECT_EQ(p.geometric, 0.0);
  EXPECT_EQ(p.area, 0.0);
}

TEST(PhaseAudit, SingleLoopValues) {
  const auto c = coupling();
  const double t1 = closure_time(c.detuning, 1);
  const double g1 = 2 * kPi * std::pow(c.lambda / c.detuning, 2);
  EXPECT_NEAR(gamma(c.lambda, c.detuning, t1), g1, 1e-12);
  for (int m : {1, 2, -3}) {
    const PhaseAudit p = phase_decompose(c, m, t1);
    EXPECT_EQ(p.loops, 1);
    EXPECT_NEAR(p.total, g1 * m * m, 1e-8 * g1 * m * m);
    EXPECT_NEAR(p.dynamic, 2 * p.total, 1e-6 * std::abs(p.total));
    EXPECT_NEAR(p.geometric, -p.total, 1e-6 * std::abs(p.total));
    EXPECT_NEAR(p.area, area_oracle(c, m, t1), 1e-8 * std::abs(p.area));
    EXPECT_NEAR(p.area, -2 * kPi * std::pow(c.lambda * m / c.detuning, 2), 1e-8 * std::abs(p.area));
    EXPECT_NEAR(p.area, p.geometric, 1e-6 * std::abs(p.geometric));
  }
}

TEST(PhaseAudit, PropertyUnconventionalRelation) {
  const auto c = coupling();
  for (int m = -3; m <= 3; ++m) {
    if (m == 0) continue;
    for (int loops = 1; loops <= 3; ++loops) {
      PhaseAuditOptions opts;
      opts.steps_per_loop = 256;
      const PhaseAudit p = phase_decompose(c, m, closure_time(c.detuning, loops), opts);
      EXPECT_EQ(p.loops, loops);
      EXPECT_LE(std::abs(p.dynamic + 2 * p.geometric), 1e-6 * std::abs(p.geometric)) << m << " " << loops;
      EXPECT_LE(std::abs(p.total + p.geometric), 1e-6 * std::abs(p.geometric)) << m << " " << loops;
    }
  }
}

TEST(PhaseAudit, PropertyAreaAdditive) {
  const auto c = coupling();
  const double one = loop_area(c, 2, closure_time(c.detuning, 1));
  EXPECT_NEAR(loop_area(c, 2, closure_time(c.detuning, 2)), 2 * one, 1e-8 * std::abs(one));
  EXPECT_NEAR(loop_area(c, 2, closure_time(c.detuning, 3)), 3 * one, 1e-8 * std::abs(one));
}

TEST(PhaseAudit, PropertyOffsetIndependent) {
  const double t = closure_time(coupling().detuning, 2);
  const PhaseAudit ref = phase_decompose(coupling(0.0), 2, t);
  for (double beta : {kPi / 3, kPi}) {
    const PhaseAudit p = phase_decompose(coupling(beta), 2, t);
    EXPECT_NEAR(p.total, ref.total, 1e-9);
    EXPECT_NEAR(p.geometric, ref.geometric, 1e-9);
    EXPECT_NEAR(p.area, ref.area, 1e-9);
  }
}

TEST(PhaseAudit, PropertySectorsReassembleCollectiveGate) {
  const auto c = coupling();
  const int n = 3;
  const double t = closure_time(c.detuning, 2);
  // Diagonal of exp(i gamma J_z^2) carries exp(i gamma m^2) on each word.
  const Matrix u = collective_phase_gate(gamma(c.lambda, c.detuning, t), Axis::kZ, n);
  for (Eigen::Index w = 0; w < u.rows(); ++w) {
    int m = 0;
    for (int q = 0; q < n; ++q) m += ((w >> q) & 1) ? -1 : 1;
    const PhaseAudit p = phase_decompose(c, m, t);
    EXPECT_LT(std::abs(std::exp(kI * p.total) - u(w, w)), 1e-8) << w;
  }
}

TEST(PhaseAudit, DeviceOverloadMatchesCoupling) {
  const PulseSetup setup = PulseSetup::reference(2);
  const DeviceParams& dev = setup.device;
  const DriveParams& drive = setup.drive;
  const EffectiveCoupling c = uniform_coupling(effective_couplings(dev, drive));
  const double t = closure_time(c.detuning, 1);
  const PhaseAudit a = phase_decompose(dev, drive, 1, t);
  const PhaseAudit b = phase_decompose(c, 1, t);
  EXPECT_EQ(a.total, b.total);
  EXPECT_EQ(loop_area(dev, drive, 1, t), b.area);
}

TEST(PhaseAudit, Guards) {
  const auto c = coupling();
  const double half = 0.5 * closure_time(c.detuning, 1);
  EXPECT_THROW(phase_decompose(c, 1, half), PhysicsGuardError);
  EXPECT_THROW(loop_area(c, 1, half), PhysicsGuardError);
  PhaseAuditOptions coarse;
  coarse.steps_per_loop = 4;
  EXPECT_THROW(phase_decompose(c, 1, closure_time(c.detuning, 1), coarse), ConfigError);
  PhaseAuditOptions tiny;
  tiny.fock_cutoff = 4;
  EXPECT_THROW(phase_decompose(c, 3, closure_time(c.detuning, 1), tiny), LeakageError);
}

}  // namespace
}  // namespace cavgeo
