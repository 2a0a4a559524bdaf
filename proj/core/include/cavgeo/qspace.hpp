#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cavgeo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

enum class Axis { kX, kY, kZ };

char axis_name(Axis axis);

/// 2x2 Pauli matrix in the {|0>, |1>} charge basis, sigma_z|0> = +|0>.
Eigen::Matrix2cd pauli(Axis axis);

/// One tensor factor of the composite space: a qubit (0-based, qubit 0 is
/// the most significant bit of the qubit word) or the cavity mode.
struct Factor {
  static constexpr int kCavityIndex = -1;

  int index = kCavityIndex;

  static constexpr Factor qubit(int j) { return Factor{j}; }
  static constexpr Factor cavity() { return Factor{kCavityIndex}; }
  constexpr bool is_cavity() const { return index == kCavityIndex; }

  friend constexpr bool operator==(Factor, Factor) = default;
};

/// N qubits tensored with one Fock-truncated mode. Basis index is
/// fock + D * qubit_word, with qubit 0 the most significant bit of the word.
class HilbertLayout {
 public:
  HilbertLayout(int n_qubits, int fock_cutoff);

  int n_qubits() const { return n_qubits_; }
  int fock_cutoff() const { return fock_cutoff_; }
  Eigen::Index qubit_dim() const { return Eigen::Index{1} << n_qubits_; }
  Eigen::Index dim() const { return qubit_dim() * fock_cutoff_; }

  Eigen::Index index(std::uint64_t qubit_word, int fock) const;
  std::pair<std::uint64_t, int> decode(Eigen::Index index) const;

  /// Value (0/1) of qubit j inside a qubit word.
  int qubit_bit(std::uint64_t qubit_word, int j) const {
    return static_cast<int>((qubit_word >> (n_qubits_ - 1 - j)) & 1u);
  }

  /// Same qubit count with a different Fock cutoff.
  HilbertLayout with_cutoff(int fock_cutoff) const { return {n_qubits_, fock_cutoff}; }

  friend bool operator==(const HilbertLayout&, const HilbertLayout&) = default;

 private:
  int n_qubits_;
  int fock_cutoff_;
};

/// Normalized state on a HilbertLayout.
class StateVector {
 public:
  /// Normalizes `amplitudes`; throws ConfigError on size mismatch or zero norm.
  StateVector(HilbertLayout layout, Vector amplitudes);

  static StateVector basis(const HilbertLayout& layout, std::uint64_t qubit_word, int fock);
  /// Product of a 2^N qubit-register vector and a D-dimensional cavity vector.
  static StateVector product(const HilbertLayout& layout, const Vector& qubits, const Vector& cavity);

  const HilbertLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  const cplx& operator[](Eigen::Index i) const { return amplitudes_[i]; }

 private:
  HilbertLayout layout_;
  Vector amplitudes_;
};

/// Dense operator on a HilbertLayout. Hermiticity and unitarity are checked
/// on first request and cached; the cache is idempotent and thread-safe.
class OperatorMatrix {
 public:
  static constexpr double kUnitaryTol = 1e-10;
  static constexpr double kHermitianTol = 1e-12;

  OperatorMatrix(HilbertLayout layout, Matrix entries);
  OperatorMatrix(const OperatorMatrix& other);
  OperatorMatrix& operator=(const OperatorMatrix& other);
  OperatorMatrix(OperatorMatrix&&) noexcept;
  OperatorMatrix& operator=(OperatorMatrix&&) noexcept;

  static OperatorMatrix identity(const HilbertLayout& layout);

  const HilbertLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return entries_; }

  bool is_hermitian() const;
  bool is_unitary() const;

  StateVector apply(const StateVector& psi) const;

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

 private:
  HilbertLayout layout_;
  Matrix entries_;
  mutable std::atomic<signed char> hermitian_{-1};
  mutable std::atomic<signed char> unitary_{-1};
};

/// Ladder, Pauli and collective operators on a layout.
struct OperatorSet {
  Matrix a;
  Matrix adag;
  std::vector<Matrix> sx, sy, sz, sp, sm;
  Matrix jx, jy, jz;

  const Matrix& sigma(Axis axis, int j) const;
  const Matrix& collective(Axis axis) const;
};

OperatorSet build_ops(const HilbertLayout& layout);

/// Ladder operator a on a D-level Fock space.
Matrix annihilation(int fock_cutoff);

Matrix kron(const Matrix& a, const Matrix& b);

/// Embeds an operator acting on one factor; identity elsewhere.
OperatorMatrix tensor_embed(const Matrix& factor_op, Factor factor, const HilbertLayout& layout);

/// Embeds a 2^k x 2^k operator acting on the listed qubits (first listed is
/// the most significant bit of the small operator's index).
Matrix embed_qubits(const Matrix& op, std::span<const int> qubits, const HilbertLayout& layout);

/// Applies a 2^k x 2^k qubit operator to the listed qubits of a state in place
/// (without materializing the full operator). The result is not renormalized.
void apply_qubits(Vector& amplitudes, const HilbertLayout& layout, const Matrix& op,
                  std::span<const int> qubits);

/// Reduced density matrix on the kept factors, ordered as in the layout
/// (kept qubits in increasing index, then the cavity if kept).
Matrix partial_trace(const StateVector& psi, std::span<const Factor> keep);
Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout, std::span<const Factor> keep);

/// Padé scaling-and-squaring exponential. Throws std::overflow_error when
/// the input or the result is not finite.
Matrix mat_exp(const Matrix& a);
OperatorMatrix mat_exp(const OperatorMatrix& a);

/// exp(A) v by a scaled Taylor series (matrix-vector products only).
Vector expm_action(const Matrix& a, const Vector& v);
/// exp(A) B for a block of columns B.
Matrix expm_action(const Matrix& a, const Matrix& block);

/// exp(-i t H) for Hermitian H via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);

/// |<phi|psi>|^2.
double fidelity(const StateVector& psi, const StateVector& phi);
double fidelity(const Vector& psi, const Vector& phi);
/// <phi|psi>.
cplx overlap_phase(const StateVector& psi, const StateVector& phi);

/// Global-phase-insensitive operator agreement |tr(U^dag V)| / dim. Also
/// accepts isometries (blocks of orthonormal columns), normalized by columns.
double phase_fidelity(const Matrix& u, const Matrix& v);

double purity(const Matrix& rho);
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// max |U^dag U - I|.
double unitarity_defect(const Matrix& u);

}  // namespace cavgeo
