#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <variant>

#include "cavgeo/errors.hpp"
#include "cavgeo/gates.hpp"
#include "cavgeo/propagate.hpp"
#include "test_util.hpp"

namespace cavgeo {
namespace {

constexpr double kPi = units::kPi;

Eigen::Matrix2cd rot(Axis axis, double angle) { return mat_exp(Matrix(-kI * angle * pauli(axis))); }

Matrix random_local(std::mt19937_64& rng) { return kron(random_unitary(2, rng), random_unitary(2, rng)); }

TEST(AncillaPrep, Eigenstates) {
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LT((ancilla_prep(Axis::kX, 1) - Eigen::Vector2cd(r, r)).norm(), 1e-15);
  EXPECT_LT((ancilla_prep(Axis::kY, 1) - Eigen::Vector2cd(r, kI * r)).norm(), 1e-15);
  for (Axis axis : {Axis::kX, Axis::kY}) {
    for (int sign : {1, -1}) {
      const Eigen::Vector2cd v = ancilla_prep(axis, sign);
      EXPECT_LT((pauli(axis) * v - static_cast<double>(sign) * v).norm(), 1e-15);
    }
  }
  EXPECT_THROW(ancilla_prep(Axis::kX, 0), ConfigError);
}

TEST(NativeOps, MatricesMatchExponentials) {
  EXPECT_LT(max_diff(native_matrix(CarrierRotation{0, Axis::kY, 0.37}), rot(Axis::kY, 0.37)), 1e-14);
  const Matrix zz = kron(pauli(Axis::kZ), pauli(Axis::kZ));
  EXPECT_LT(max_diff(native_matrix(ZZCoupling{0, 1, 0.8}), mat_exp(-kI * 0.8 * zz)), 1e-14);
  const auto ops = build_ops(HilbertLayout(3, 1));
  EXPECT_LT(max_diff(native_matrix(CollectivePhase{{0, 1, 2}, 0.3, Axis::kY}), mat_exp(kI * 0.3 * ops.jy * ops.jy)),
            1e-13);
  EXPECT_THROW(native_matrix(CarrierRotation{0, Axis::kZ, 0.1}), ConfigError);
}

TEST(NativeOps, ApplyMatchesEmbedding) {
  std::mt19937_64 rng(8);
  const HilbertLayout layout(3, 2);
  const NativeOp op = CollectivePhase{{2, 0}, 0.6, Axis::kX};
  Vector v = random_state(layout.dim(), rng);
  const int q[] = {2, 0};
  const Vector expect = embed_qubits(native_matrix(op), q, layout) * v;
  apply_native(v, layout, op);
  EXPECT_LT((v - expect).norm(), 1e-14);
}

TEST(SingleQubitGate, QuarterAngleIsPauliUpToPhase) {
  const SingleQubitGate g = single_qubit_gate(kPi / 4, Axis::kX, 1);
  const Matrix ix = kI * Matrix(pauli(Axis::kX));
  EXPECT_NEAR(certify(g.gate, ix), 1.0, 1e-14);
  // With the e^{2i gamma} factor kept the gate is -sigma_x = e^{i pi/2} (i sigma_x).
  EXPECT_LT(max_diff(g.gate, -Matrix(pauli(Axis::kX))), 1e-14);
  EXPECT_LT(max_diff(g.gate, g.expected), 1e-14);
  EXPECT_LT(g.residual, 1e-14);
}

TEST(SingleQubitGate, ZeroAngleIsIdentity) {
  const SingleQubitGate g = single_qubit_gate(0.0, Axis::kY, -1);
  EXPECT_LT(max_diff(g.gate, Matrix::Identity(2, 2)), 1e-15);
}

TEST(SingleQubitGate, AncillaIsLeftUntouched) {
  for (int sign : {1, -1}) {
    const SingleQubitGate g = single_qubit_gate(0.41, Axis::kY, sign);
    const Eigen::Vector2cd a = ancilla_prep(Axis::kY, sign);
    EXPECT_LT(max_diff(g.ancilla_marginal, a * a.adjoint()), 1e-14);
  }
}

TEST(SingleQubitGate, RejectsNonEigenstateAncilla) {
  EXPECT_THROW(single_qubit_gate(0.3, Axis::kX, Eigen::Vector2cd(1.0, 0.0)), PhysicsGuardError);
}

TEST(SingleQubitGate, PropertyOperatorIdentity) {
  std::mt19937_64 rng(12);
  for (double gam : {kPi / 8, kPi / 4, kPi / 2}) {
    for (Axis axis : {Axis::kX, Axis::kY}) {
      for (int sign : {1, -1}) {
        const Eigen::Vector2cd anc = ancilla_prep(axis, sign);
        const Matrix pair = u_closed(gam, axis, HilbertLayout(2, 1)).matrix();
        const Matrix gate = std::exp(2.0 * kI * gam) * rot(axis, -2.0 * sign * gam);
        for (int trial = 0; trial < 20; ++trial) {
          const Vector psi = random_state(2, rng);
          const Vector lhs = pair * kron(psi, anc);
          const Vector rhs = kron(gate * psi, anc);
          ASSERT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
        }
        EXPECT_LT(max_diff(single_qubit_gate(gam, axis, sign).gate, gate), 1e-12);
      }
    }
  }
}

TEST(SingleQubitGate, PropertyRotationsDoNotCommute) {
  const double gam = kPi / 8;
  const Matrix ux = single_qubit_gate(gam, Axis::kX, 1).gate;
  const Matrix uy = single_qubit_gate(gam, Axis::kY, 1).gate;
  EXPECT_LT(certify(ux * uy, uy * ux), 1.0 - 1e-3);
}

GatePlan rotation_plan(Axis axis, double angle) {
  GatePlan p;
  p.n_qubits = 1;
  p.ops = {CarrierRotation{0, axis, angle}};
  p.target = rot(axis, angle);
  p.roles = {QubitRole::kData};
  p.preparation = {std::nullopt};
  return p;
}

TEST(Compose, Examples) {
  const GatePlan u = rotation_plan(Axis::kX, 0.7);
  const GatePlan udag = rotation_plan(Axis::kX, -0.7);
  const GatePlan both[] = {u, udag};
  const GatePlan c = compose(both);
  EXPECT_NEAR(certify(c.unitary(), Matrix::Identity(2, 2)), 1.0, 1e-15);
  EXPECT_NEAR(c.certified_fidelity(), 1.0, 1e-15);

  const GatePlan empty = compose(std::span<const GatePlan>{});
  EXPECT_LT(max_diff(empty.unitary(), Matrix::Identity(1, 1)), 1e-15);

  const GatePlan xy[] = {rotation_plan(Axis::kX, 0.5), rotation_plan(Axis::kY, 0.5)};
  const GatePlan yx[] = {rotation_plan(Axis::kY, 0.5), rotation_plan(Axis::kX, 0.5)};
  const Matrix a = compose(xy).unitary();
  EXPECT_LT(max_diff(a, rot(Axis::kY, 0.5) * rot(Axis::kX, 0.5)), 1e-14);
  EXPECT_LT(certify(a, compose(yx).unitary()), 1.0 - 1e-3);

  GatePlan two = u;
  two.n_qubits = 2;
  const GatePlan mixed[] = {u, two};
  EXPECT_THROW(compose(mixed), ConfigError);
}

TEST(Makhlin, KnownValues) {
  for (const Matrix& m : {cnot_matrix(), cz_matrix()}) {
    const auto inv = makhlin_invariants(m);
    EXPECT_LT(std::abs(inv.g1), 1e-14);
    EXPECT_NEAR(inv.g2, 1.0, 1e-14);
  }
  const auto id = makhlin_invariants(Matrix::Identity(4, 4));
  EXPECT_LT(std::abs(id.g1 - 1.0), 1e-14);
  EXPECT_NEAR(id.g2, 3.0, 1e-14);
  EXPECT_TRUE(locally_equivalent(cnot_matrix(), cz_matrix()));
  EXPECT_FALSE(locally_equivalent(cnot_matrix(), Matrix::Identity(4, 4)));
  EXPECT_THROW(makhlin_invariants(Matrix::Ones(4, 4)), ConfigError);
}

// Closed-form invariants of the canonical gate exp(i/2 (c1 XX + c2 YY + c3 ZZ)).
MakhlinInvariants canonical_invariants(double c1, double c2, double c3) {
  auto c = [](double x) { return std::cos(x) * std::cos(x); };
  auto s = [](double x) { return std::sin(x) * std::sin(x); };
  MakhlinInvariants out;
  out.g1 = cplx(c(c1) * c(c2) * c(c3) - s(c1) * s(c2) * s(c3),
                0.25 * std::sin(2 * c1) * std::sin(2 * c2) * std::sin(2 * c3));
  out.g2 = 4 * c(c1) * c(c2) * c(c3) - 4 * s(c1) * s(c2) * s(c3) - std::cos(2 * c1) * std::cos(2 * c2) * std::cos(2 * c3);
  return out;
}

TEST(Makhlin, AgreesWithCanonicalFormOracle) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const Matrix xx = kron(pauli(Axis::kX), pauli(Axis::kX));
  const Matrix yy = kron(pauli(Axis::kY), pauli(Axis::kY));
  const Matrix zz = kron(pauli(Axis::kZ), pauli(Axis::kZ));
  for (int trial = 0; trial < 20; ++trial) {
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng);
    const Matrix can = mat_exp(0.5 * kI * (c1 * xx + c2 * yy + c3 * zz));
    const auto got = makhlin_invariants(random_local(rng) * can * random_local(rng));
    const auto want = canonical_invariants(c1, c2, c3);
    EXPECT_LT(std::abs(got.g1 - want.g1), 1e-12);
    EXPECT_NEAR(got.g2, want.g2, 1e-12);
  }
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const auto s = makhlin_invariants(swap);
  EXPECT_LT(std::abs(s.g1 + 1.0), 1e-13);
  EXPECT_NEAR(s.g2, -3.0, 1e-13);
}

TEST(Makhlin, PropertyLocalInvariance) {
  std::mt19937_64 rng(99);
  const Matrix base = random_unitary(4, rng);
  const auto ref = makhlin_invariants(base);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inv = makhlin_invariants(random_local(rng) * base * random_local(rng));
    EXPECT_LT(std::abs(inv.g1 - ref.g1), 1e-9);
    EXPECT_LT(std::abs(inv.g2 - ref.g2), 1e-9);
  }
}

TEST(CzLocus, QuarterAngles) {
  const auto locus = cz_equivalence_locus(16);
  ASSERT_EQ(locus.size(), 2u);
  EXPECT_NEAR(locus[0], kPi / 4, 1e-15);
  EXPECT_NEAR(locus[1], 3 * kPi / 4, 1e-15);
  EXPECT_LT(max_diff(pair_coupling(0.3, Axis::kY), mat_exp(kI * 0.3 * kron(pauli(Axis::kY), pauli(Axis::kY)))),
            1e-14);
}

TEST(Euler, RoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Matrix2cd u = random_unitary(2, rng);
    const EulerXYX e = euler_xyx(u);
    const Eigen::Matrix2cd back =
        std::exp(kI * e.phase) * rot(Axis::kX, e.first) * rot(Axis::kY, e.middle) * rot(Axis::kX, e.last);
    EXPECT_LT(max_diff(back, u), 1e-12);
    GatePlan p;
    p.n_qubits = 1;
    p.ops = local_ops(0, u);
    EXPECT_NEAR(certify(p.unitary(), u), 1.0, 1e-12);
  }
  EXPECT_TRUE(local_ops(0, Eigen::Matrix2cd::Identity()).empty());
  EXPECT_EQ(local_ops(0, rot(Axis::kX, 0.4)).size(), 1u);
}

class CnotPlanTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { plan_ = new GatePlan(cnot_plan(0, 1, 2)); }
  static void TearDownTestSuite() { delete plan_; }
  static GatePlan* plan_;
};
GatePlan* CnotPlanTest::plan_ = nullptr;

TEST_F(CnotPlanTest, CertifiesAndUsesOneEntangler) {
  EXPECT_GE(plan_->certified_fidelity(), 1.0 - 1e-8);
  int entanglers = 0;
  for (const auto& op : plan_->ops) {
    if (std::holds_alternative<CollectivePhase>(op)) ++entanglers;
    EXPECT_FALSE(std::holds_alternative<ZZCoupling>(op));
  }
  EXPECT_EQ(entanglers, 1);
}

TEST_F(CnotPlanTest, TruthTableAndBellState) {
  const Matrix u = plan_->unitary();
  const int image[] = {0, 1, 3, 2};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::norm(u(image[k], k)), 1.0, 1e-10);
  // All columns share one global phase.
  const cplx phase = u(0, 0);
  for (int k = 1; k < 4; ++k) EXPECT_LT(std::abs(u(image[k], k) - phase), 1e-8);
  Vector plus0 = Vector::Zero(4);
  plus0[0] = plus0[2] = 1.0 / std::sqrt(2.0);
  Vector bell = Vector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fidelity(Vector(u * plus0), bell), 1.0, 1e-10);
}

TEST_F(CnotPlanTest, InvariantsMatchCnot) {
  EXPECT_TRUE(locally_equivalent(plan_->unitary(), cnot_matrix()));
}

TEST(CnotPlan, EmbedsInLargerRegister) {
  const GatePlan p = cnot_plan(2, 0, 3);
  const int pair[] = {2, 0};
  EXPECT_GE(certify(p.unitary(), embed_qubits(cnot_matrix(), pair, HilbertLayout(3, 1))), 1.0 - 1e-8);
  EXPECT_THROW(cnot_plan(1, 1, 2), ConfigError);
}

}  // namespace
}  // namespace cavgeo
