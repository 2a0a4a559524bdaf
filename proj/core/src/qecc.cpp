#include "cavgeo/qecc.hpp"

#include <cmath>

#include "cavgeo/errors.hpp"
#include "cavgeo/model.hpp"
#include "cavgeo/propagate.hpp"

namespace cavgeo {

namespace {

constexpr double kPi = units::kPi;

Eigen::Matrix2cd letter(char c) {
  switch (c) {
    case 'I': return Eigen::Matrix2cd::Identity();
    case 'X': return pauli(Axis::kX);
    case 'Y': return pauli(Axis::kY);
    case 'Z': return pauli(Axis::kZ);
    default: throw ConfigError(std::string("PauliString: unknown letter '") + c + "'");
  }
}

PauliString make_string(char p, std::initializer_list<int> qubits) {
  PauliString s{std::string(kShorQubits, 'I')};
  for (int q : qubits) s.ops[static_cast<std::size_t>(q)] = p;
  return s;
}

Vector block(double sign) {
  Vector v = Vector::Zero(8);
  v[0] = 1.0 / std::sqrt(2.0);
  v[7] = sign / std::sqrt(2.0);
  return v;
}

// CNOT(c -> t1) CNOT(c -> t2) = phase * exp(-i pi/2 Z_c) exp(-i pi/4 X_t1)
// exp(-i pi/4 X_t2) exp(i pi/4 Z_c X_t1) exp(i pi/4 Z_c X_t2).
void zz_fanout(std::vector<NativeOp>& ops, int c, int t1, int t2) {
  for (int t : {t1, t2}) {
    ops.emplace_back(CarrierRotation{t, Axis::kY, -kPi / 4.0});
    ops.emplace_back(ZZCoupling{c, t, -kPi / 4.0});
    ops.emplace_back(CarrierRotation{t, Axis::kY, kPi / 4.0});
    ops.emplace_back(CarrierRotation{t, Axis::kX, kPi / 4.0});
  }
  ops.emplace_back(CarrierRotation{c, Axis::kY, kPi / 2.0});
  ops.emplace_back(CarrierRotation{c, Axis::kX, kPi / 2.0});
}

// Same fan-out with the Z_c X_t terms taken from collective phases: with
// W = exp(-i pi/4 Y_c), exp(i pi/4 Z_c (X_t1 + X_t2)) = W^dag exp(i pi/4 X_c (X_t1 + X_t2)) W,
// and exp(i pi/8 J^2) on {c, t1, t2} times exp(3i pi/8 J^2) on {t1, t2}
// leaves exactly that XX sum up to a global phase.
void collective_fanout(std::vector<NativeOp>& ops, int c, int t1, int t2) {
  ops.emplace_back(CarrierRotation{c, Axis::kY, kPi / 4.0});
  ops.emplace_back(CollectivePhase{{c, t1, t2}, kPi / 8.0, Axis::kX});
  ops.emplace_back(CollectivePhase{{t1, t2}, 3.0 * kPi / 8.0, Axis::kX});
  ops.emplace_back(CarrierRotation{c, Axis::kY, -kPi / 4.0});
  ops.emplace_back(CarrierRotation{t1, Axis::kX, kPi / 4.0});
  ops.emplace_back(CarrierRotation{t2, Axis::kX, kPi / 4.0});
  ops.emplace_back(CarrierRotation{c, Axis::kY, kPi / 2.0});
  ops.emplace_back(CarrierRotation{c, Axis::kX, kPi / 2.0});
}

}  // namespace

Matrix PauliString::matrix() const {
  Matrix m = Matrix::Identity(1, 1);
  for (char c : ops) m = kron(m, letter(c));
  return m;
}

Vector PauliString::apply(const Vector& amplitudes, const HilbertLayout& layout) const {
  if (layout.n_qubits() != n_qubits()) throw ConfigError("PauliString: layout qubit count mismatch");
  Vector out = amplitudes;
  for (int j = 0; j < n_qubits(); ++j) {
    const char c = ops[static_cast<std::size_t>(j)];
    if (c == 'I') continue;
    const int q[] = {j};
    apply_qubits(out, layout, letter(c), q);
  }
  return out;
}

std::vector<PauliString> shor_stabilizers() {
  return {
      make_string('Z', {0, 1}), make_string('Z', {1, 2}), make_string('Z', {3, 4}),
      make_string('Z', {4, 5}), make_string('Z', {6, 7}), make_string('Z', {7, 8}),
      make_string('X', {0, 1, 2, 3, 4, 5}), make_string('X', {3, 4, 5, 6, 7, 8}),
  };
}

std::vector<double> stabilizer_check(const StateVector& state, const std::vector<PauliString>& generators) {
  std::vector<double> out;
  out.reserve(generators.size());
  for (const auto& g : generators) {
    out.push_back(state.amplitudes().dot(g.apply(state.amplitudes(), state.layout())).real());
  }
  return out;
}

GatePlan shor_primitive_circuit() {
  GatePlan plan;
  plan.n_qubits = kShorQubits;
  plan.roles.assign(kShorQubits, QubitRole::kData);
  plan.preparation.assign(kShorQubits, std::nullopt);
  zz_fanout(plan.ops, 0, 3, 6);
  // exp(i pi/4 Y): |0> -> |->, |1> -> |+>.
  for (int c : {0, 3, 6}) plan.ops.emplace_back(CarrierRotation{c, Axis::kY, -kPi / 4.0});
  for (int c : {0, 3, 6}) collective_fanout(plan.ops, c, c + 1, c + 2);
  return plan;
}

StateVector shor_encode(cplx a, cplx b, EncodeMode mode) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10) {
    throw ConfigError("shor_encode: |a|^2 + |b|^2 must equal 1");
  }
  if (mode == EncodeMode::kIdeal) {
    const Vector minus = block(-1.0);
    const Vector plus = block(1.0);
    const Vector v = a * kron(kron(minus, minus), minus) + b * kron(kron(plus, plus), plus);
    return StateVector(HilbertLayout(kShorQubits, 1), v);
  }
  const HilbertLayout layout(kShorQubits, kShorPrimitiveCutoff);
  Vector amps = Vector::Zero(layout.dim());
  amps[layout.index(0, 0)] = a;
  amps[layout.index(std::uint64_t{1} << (kShorQubits - 1), 0)] = b;
  for (const auto& op : shor_primitive_circuit().ops) apply_native(amps, layout, op);
  StateVector out(layout, std::move(amps));
  leakage_guard(out);
  return out;
}

Vector register_state(const StateVector& state) {
  const HilbertLayout& layout = state.layout();
  Vector v(layout.qubit_dim());
  for (Eigen::Index w = 0; w < layout.qubit_dim(); ++w) v[w] = state[layout.index(static_cast<std::uint64_t>(w), 0)];
  if (std::abs(v.squaredNorm() - 1.0) > 1e-12) {
    throw PhysicsGuardError("cavity_excited", "register_state: cavity is not in vacuum");
  }
  return v;
}

}  // namespace cavgeo
