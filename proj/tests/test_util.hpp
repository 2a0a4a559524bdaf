#pragma once

#include <random>

#include "cavgeo/qspace.hpp"

namespace cavgeo {

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline Matrix random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(g(rng), g(rng));
  return m;
}

inline Vector random_state(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v / v.norm();
}

/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
inline Matrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix z = random_matrix(n, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

}  // namespace cavgeo
