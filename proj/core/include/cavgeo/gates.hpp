#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "cavgeo/qspace.hpp"

namespace cavgeo {

/// exp(-i angle sigma_axis) on one qubit (static-flux carrier, axis x or y).
struct CarrierRotation {
  int qubit = 0;
  Axis axis = Axis::kX;
  double angle = 0.0;
};

/// exp(i gamma J_axis^2) on a subset of qubits (closed geometric loop).
struct CollectivePhase {
  std::vector<int> qubits;
  double gamma = 0.0;
  Axis axis = Axis::kX;
};

/// exp(-i angle sigma_z sigma_z) between two qubits (capacitive coupling).
struct ZZCoupling {
  int first = 0;
  int second = 1;
  double angle = 0.0;
};

using NativeOp = std::variant<CarrierRotation, CollectivePhase, ZZCoupling>;

/// Qubits touched by the op and its matrix on them (first listed qubit is the
/// most significant index bit).
std::vector<int> native_qubits(const NativeOp& op);
Matrix native_matrix(const NativeOp& op);

void apply_native(Vector& amplitudes, const HilbertLayout& layout, const NativeOp& op);

enum class QubitRole { kData, kAncilla };

/// Eigenstate of sigma_axis that an ancilla is prepared in.
struct AncillaPrep {
  Axis axis = Axis::kX;
  int sign = +1;
};

struct GatePlan {
  int n_qubits = 0;
  std::vector<NativeOp> ops;  ///< time order: ops.front() acts first
  Matrix target;              ///< 2^N x 2^N target unitary (may be empty)
  std::vector<QubitRole> roles;
  std::vector<std::optional<AncillaPrep>> preparation;

  /// Product of the native ops on the qubit register.
  Matrix unitary() const;
  /// certify(unitary(), target).
  double certified_fidelity() const;
};

/// Eigenstate of sigma_axis with eigenvalue `sign` (+1 or -1).
Eigen::Vector2cd ancilla_prep(Axis axis, int sign);

struct SingleQubitGate {
  Eigen::Matrix2cd gate;      ///< effective data-qubit operator, global phase included
  Eigen::Matrix2cd expected;  ///< e^{2i gamma} exp(+-2i gamma sigma_axis)
  double residual = 0.0;      ///< norm of the part not of the form (G|psi>) x |ancilla>
  Matrix ancilla_marginal;    ///< ancilla state after the gate, averaged over data inputs
};

/// Applies exp(i gamma J_axis^2) to (data, ancilla) with the ancilla in an
/// eigenstate of sigma_axis, and extracts the gate on the data qubit.
SingleQubitGate single_qubit_gate(double gamma, Axis axis, int sign);
/// Same with an explicit ancilla vector; throws PhysicsGuardError if it is not
/// an eigenstate of sigma_axis.
SingleQubitGate single_qubit_gate(double gamma, Axis axis, const Eigen::Vector2cd& ancilla);

GatePlan compose(std::span<const GatePlan> plans);
/// |tr(U^dag V)| / dim.
double certify(const Matrix& u, const Matrix& v);

struct MakhlinInvariants {
  cplx g1;
  double g2 = 0.0;
};

/// Local-equivalence invariants of a two-qubit unitary (magic basis).
MakhlinInvariants makhlin_invariants(const Matrix& u);
bool locally_equivalent(const Matrix& u, const Matrix& v, double tol = 1e-8);

/// U = e^{i phase} Rx(first) Ry(middle) Rx(last), R_axis(t) = exp(-i t sigma_axis).
struct EulerXYX {
  double phase = 0.0;
  double first = 0.0;
  double middle = 0.0;
  double last = 0.0;
};
EulerXYX euler_xyx(const Eigen::Matrix2cd& u);
/// Carrier rotations realizing `u` on `qubit` up to global phase, time order.
std::vector<NativeOp> local_ops(int qubit, const Eigen::Matrix2cd& u);

Matrix cnot_matrix();
Matrix cz_matrix();

/// CNOT(control -> target) from one collective phase gate on the pair
/// conjugated by carrier rotations; the local corrections are found by
/// least-squares search. Throws PhysicsGuardError if certification < 1 - 1e-8.
GatePlan cnot_plan(int control, int target, int n_qubits);

/// Two-qubit exp(i theta sigma_axis sigma_axis).
Matrix pair_coupling(double theta, Axis axis);

/// Angles theta in [0, pi) (grid of `samples` points) where exp(i theta XX)
/// is locally equivalent to CZ.
std::vector<double> cz_equivalence_locus(int samples, double tol = 1e-8);

}  // namespace cavgeo
