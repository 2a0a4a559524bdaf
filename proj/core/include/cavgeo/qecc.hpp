#pragma once

#include <string>
#include <vector>

#include "cavgeo/gates.hpp"
#include "cavgeo/qspace.hpp"

namespace cavgeo {

enum class EncodeMode { kIdeal, kPrimitive };

inline constexpr int kShorQubits = 9;
inline constexpr int kShorPrimitiveCutoff = 4;

/// Tensor product of single-qubit Paulis, one letter (I, X, Y, Z) per qubit.
struct PauliString {
  std::string ops;

  int n_qubits() const { return static_cast<int>(ops.size()); }
  /// 2^N x 2^N matrix, qubit 0 the most significant bit.
  Matrix matrix() const;
  /// Applies the string to the qubit factors of a state vector.
  Vector apply(const Vector& amplitudes, const HilbertLayout& layout) const;
};

/// Z1Z2, Z2Z3, Z4Z5, Z5Z6, Z7Z8, Z8Z9, X1..X6, X4..X9.
std::vector<PauliString> shor_stabilizers();

/// <psi|S_k|psi> per generator.
std::vector<double> stabilizer_check(const StateVector& state, const std::vector<PauliString>& generators);

/// Native circuit taking (a|0> + b|1>) on qubit 0, others in |0>, to the
/// encoded state: sigma_z sigma_z fan-out of qubit 0 onto qubits 3 and 6,
/// then a collective-phase fan-out inside each block of three.
GatePlan shor_primitive_circuit();

/// a [(|000> - |111>)/sqrt2]^3 + b [(|000> + |111>)/sqrt2]^3 with the cavity
/// in vacuum. Ideal mode writes the amplitudes (cutoff 1); primitive mode runs
/// shor_primitive_circuit on a cutoff-4 layout and checks the cavity tail.
/// Throws ConfigError unless |a|^2 + |b|^2 = 1.
StateVector shor_encode(cplx a, cplx b, EncodeMode mode = EncodeMode::kIdeal);

/// Qubit-register vector of a state whose cavity is in vacuum; throws
/// PhysicsGuardError if the cavity carries any excitation.
Vector register_state(const StateVector& state);

}  // namespace cavgeo
