#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "cavgeo/errors.hpp"
#include "cavgeo/propagate.hpp"
#include "cavgeo/qspace.hpp"
#include "test_util.hpp"

namespace cavgeo {
namespace {

TEST(HilbertLayout, DimensionAndRoundTrip) {
  const HilbertLayout layout(3, 5);
  EXPECT_EQ(layout.dim(), 40);
  for (Eigen::Index i = 0; i < layout.dim(); ++i) {
    const auto [word, fock] = layout.decode(i);
    EXPECT_EQ(layout.index(word, fock), i);
    EXPECT_EQ(i, static_cast<Eigen::Index>(fock + 5 * word));
  }
  EXPECT_EQ(HilbertLayout(0, 3).dim(), 3);  // cavity-only layouts are allowed
  EXPECT_THROW(HilbertLayout(-1, 1), ConfigError);
  EXPECT_THROW(HilbertLayout(1, 0), ConfigError);
}

TEST(BuildOps, SingleQubitCollectiveIsPauli) {
  const auto ops = build_ops(HilbertLayout(1, 1));
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_LT(max_diff(ops.jx, expected), 1e-15);
}

TEST(BuildOps, LadderAndTruncatedCommutator) {
  const Matrix a = annihilation(3);
  Vector two = Vector::Zero(3);
  two[2] = 1.0;
  Vector expect = Vector::Zero(3);
  expect[1] = std::sqrt(2.0);
  EXPECT_LT((a * two - expect).norm(), 1e-15);

  const Matrix a5 = annihilation(5);
  const Matrix comm = a5 * a5.adjoint() - a5.adjoint() * a5;
  Matrix oracle = Matrix::Identity(5, 5);
  oracle(4, 4) = -4.0;
  EXPECT_LT(max_diff(comm, oracle), 1e-13);
}

TEST(BuildOps, LadderActsOnCavityOnly) {
  const HilbertLayout layout(2, 4);
  const auto ops = build_ops(layout);
  for (Eigen::Index c = 0; c < layout.dim(); ++c) {
    for (Eigen::Index r = 0; r < layout.dim(); ++r) {
      const auto [wr, fr] = layout.decode(r);
      const auto [wc, fc] = layout.decode(c);
      const cplx expect = (wr == wc && fr == fc - 1) ? std::sqrt(static_cast<double>(fc)) : 0.0;
      EXPECT_NEAR(std::abs(ops.a(r, c) - expect), 0.0, 1e-15);
    }
  }
}

TEST(TensorEmbed, SigmaZOnFirstQubitPattern) {
  const HilbertLayout layout(2, 2);
  const Matrix sz = tensor_embed(pauli(Axis::kZ), Factor::qubit(0), layout).matrix();
  const double pattern[] = {1, 1, 1, 1, -1, -1, -1, -1};
  for (int i = 0; i < 8; ++i) EXPECT_EQ(sz(i, i), cplx(pattern[i]));
  EXPECT_LT((sz - Matrix(sz.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(TensorEmbed, IdentityAndProducts) {
  const HilbertLayout layout(2, 2);
  EXPECT_LT(max_diff(tensor_embed(Matrix::Identity(2, 2), Factor::qubit(1), layout).matrix(),
                     Matrix::Identity(8, 8)),
            1e-15);
  const Matrix x0 = tensor_embed(pauli(Axis::kX), Factor::qubit(0), layout).matrix();
  const Matrix x1 = tensor_embed(pauli(Axis::kX), Factor::qubit(1), layout).matrix();
  // Brute-force sigma_x (x) sigma_x (x) I_2 by explicit index arithmetic.
  Matrix oracle = Matrix::Zero(8, 8);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const int fr = r % 2, fc = c % 2, wr = r / 2, wc = c / 2;
      if (fr == fc && (wr ^ wc) == 3) oracle(r, c) = 1.0;
    }
  }
  EXPECT_LT(max_diff(x0 * x1, oracle), 1e-15);
  EXPECT_THROW(tensor_embed(Matrix::Identity(3, 3), Factor::qubit(0), layout), ConfigError);
}

TEST(TensorEmbed, PropertyEmbedCommutesWithProducts) {
  std::mt19937_64 rng(11);
  const HilbertLayout layout(2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(3, rng);
    const Matrix b = random_matrix(3, rng);
    const Matrix lhs = tensor_embed(a * b, Factor::cavity(), layout).matrix();
    const Matrix rhs = tensor_embed(a, Factor::cavity(), layout).matrix() * tensor_embed(b, Factor::cavity(), layout).matrix();
    EXPECT_LT(max_diff(lhs, rhs), 1e-13);
  }
}

TEST(ApplyQubits, MatchesEmbeddedOperator) {
  std::mt19937_64 rng(3);
  const HilbertLayout layout(4, 3);
  const Matrix op = random_unitary(4, rng);
  const int qubits[] = {3, 1};
  Vector v = random_state(layout.dim(), rng);
  const Vector expect = embed_qubits(op, qubits, layout) * v;
  apply_qubits(v, layout, op, qubits);
  EXPECT_LT((v - expect).norm(), 1e-13);
}

TEST(PartialTrace, Examples) {
  const HilbertLayout one(1, 5);
  const StateVector prod = StateVector::basis(one, 0, 3);
  const Factor keep_q[] = {Factor::qubit(0)};
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  EXPECT_LT(max_diff(partial_trace(prod, keep_q), zero), 1e-15);

  const HilbertLayout two(2, 1);
  Vector bell = Vector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  EXPECT_LT(max_diff(partial_trace(StateVector(two, bell), keep_q), Matrix::Identity(2, 2) / 2.0), 1e-15);

  const HilbertLayout three(3, 1);
  Vector ghz = Vector::Zero(8);
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  const Factor keep2[] = {Factor::qubit(0), Factor::qubit(1)};
  Matrix oracle = Matrix::Zero(4, 4);
  oracle(0, 0) = oracle(3, 3) = 0.5;
  EXPECT_LT(max_diff(partial_trace(StateVector(three, ghz), keep2), oracle), 1e-15);

  EXPECT_THROW(partial_trace(prod, std::span<const Factor>{}), ConfigError);
}

TEST(PartialTrace, PropertyTraceHermitianPositive) {
  std::mt19937_64 rng(5);
  const HilbertLayout layout(3, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const StateVector psi(layout, random_state(layout.dim(), rng));
    const Factor keep[] = {Factor::qubit(2), Factor::cavity()};
    const Matrix rho = partial_trace(psi, keep);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_LT(max_diff(rho, rho.adjoint()), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);

    const Factor all[] = {Factor::qubit(0), Factor::qubit(1), Factor::qubit(2), Factor::cavity()};
    EXPECT_NEAR(partial_trace(psi, all).trace().real(), 1.0, 1e-12);
    // Density-matrix route agrees with the state route.
    const Matrix dens = psi.amplitudes() * psi.amplitudes().adjoint();
    EXPECT_LT(max_diff(partial_trace(dens, layout, keep), rho), 1e-13);
  }
}

TEST(MatExp, Examples) {
  EXPECT_LT(max_diff(mat_exp(Matrix::Zero(4, 4)), Matrix::Identity(4, 4)), 1e-15);
  const Matrix x = pauli(Axis::kX);
  EXPECT_LT(max_diff(mat_exp(kI * (units::kPi / 2.0) * x), kI * x), 1e-14);
}

TEST(MatExp, CollectiveEntanglerOnTwoQubits) {
  // Exponent i gamma J_x^2 with gamma = ms_gamma(pi/2), i.e. the pi/2 Molmer-Sorensen angle.
  const auto ops = build_ops(HilbertLayout(2, 1));
  const Matrix u = mat_exp(kI * ms_gamma(units::kPi / 2.0) * (ops.jx * ops.jx));
  Vector target = Vector::Zero(4);
  target[0] = 1.0 / std::sqrt(2.0);
  target[3] = -kI / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(target.dot(u.col(0))), 1.0, 1e-14);
}

TEST(MatExp, AgreesWithIndependentOracle) {
  std::mt19937_64 rng(7);
  for (double scale : {1e-3, 0.3, 4.0, 40.0}) {
    for (int n : {2, 7, 16}) {
      const Matrix a = random_matrix(n, rng) * scale;
      const Matrix oracle = a.exp();
      const Matrix got = mat_exp(a);
      EXPECT_LT(max_diff(got, oracle) / std::max(1.0, oracle.cwiseAbs().maxCoeff()), 1e-12)
          << "scale " << scale << " n " << n;
    }
  }
}

TEST(MatExp, PropertySkewHermitianUnitaryAndInverse) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix h = random_matrix(12, rng);
    h = (h + h.adjoint()).eval();
    h *= 50.0 / h.cwiseAbs().colwise().sum().maxCoeff();
    const Matrix a = kI * h;
    const Matrix u = mat_exp(a);
    EXPECT_LT(unitarity_defect(u), 1e-10);
    EXPECT_LT(max_diff(u * mat_exp(-a), Matrix::Identity(12, 12)), 1e-10);
    EXPECT_LT(max_diff(u, expm_hermitian(h, -1.0)), 1e-10);
  }
}

TEST(MatExp, OverflowIsReported) {
  Matrix a = Matrix::Identity(2, 2) * 1e6;
  EXPECT_THROW(mat_exp(a), std::overflow_error);
  a(0, 0) = std::nan("");
  EXPECT_THROW(mat_exp(a), std::overflow_error);
}

TEST(ExpmAction, AgreesWithMatExp) {
  std::mt19937_64 rng(13);
  for (double scale : {0.01, 1.0, 20.0}) {
    Matrix h = random_matrix(30, rng);
    h = (h + h.adjoint()).eval() * scale;
    const Vector v = random_state(30, rng);
    EXPECT_LT((expm_action(-kI * h, v) - mat_exp(-kI * h) * v).norm(), 1e-11);
  }
}

TEST(Fidelity, Examples) {
  const HilbertLayout layout(1, 1);
  const StateVector zero = StateVector::basis(layout, 0, 0);
  const StateVector one = StateVector::basis(layout, 1, 0);
  Vector plus(2);
  plus << 1, 1;
  EXPECT_DOUBLE_EQ(fidelity(zero, zero), 1.0);
  EXPECT_DOUBLE_EQ(fidelity(zero, one), 0.0);
  EXPECT_NEAR(fidelity(zero, StateVector(layout, plus)), 0.5, 1e-15);
  const StateVector phased(layout, Vector(zero.amplitudes() * std::exp(kI * 0.7)));
  EXPECT_NEAR(fidelity(phased, zero), 1.0, 1e-15);
  EXPECT_NEAR(std::arg(overlap_phase(phased, zero)), 0.7, 1e-15);
  EXPECT_THROW(fidelity(zero, StateVector::basis(HilbertLayout(1, 2), 0, 0)), ConfigError);
}

TEST(StateVector, NormalizesAndRejectsBadInput) {
  const HilbertLayout layout(1, 2);
  Vector v(4);
  v << 3, 4, 0, 0;
  const StateVector s(layout, v);
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_THROW(StateVector(layout, Vector::Zero(4)), ConfigError);
  EXPECT_THROW(StateVector(layout, Vector::Ones(3)), ConfigError);
}

TEST(OperatorMatrix, FlagsAndCopies) {
  const HilbertLayout layout(1, 2);
  const OperatorMatrix h = tensor_embed(pauli(Axis::kY), Factor::qubit(0), layout);
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_TRUE(h.is_unitary());
  const OperatorMatrix a = tensor_embed(annihilation(2), Factor::cavity(), layout);
  EXPECT_FALSE(a.is_hermitian());
  EXPECT_FALSE(a.is_unitary());
  const OperatorMatrix copy = h;
  EXPECT_TRUE(copy.is_unitary());
  EXPECT_LT(max_diff((h * h).matrix(), Matrix::Identity(4, 4)), 1e-15);
}

TEST(Diagnostics, PurityAndTraceDistance) {
  const Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  EXPECT_NEAR(purity(mixed), 0.5, 1e-15);
  EXPECT_NEAR(purity(pure), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(pure, mixed), 0.5, 1e-14);
  EXPECT_NEAR(phase_fidelity(Matrix::Identity(2, 2), kI * Matrix::Identity(2, 2)), 1.0, 1e-15);
}

}  // namespace
}  // namespace cavgeo
