#include "cavgeo/gates.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "cavgeo/errors.hpp"
#include "cavgeo/propagate.hpp"

namespace cavgeo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Eigen::Matrix2cd rotation(Axis axis, double angle) {
  return std::cos(angle) * Eigen::Matrix2cd::Identity() - kI * std::sin(angle) * pauli(axis);
}

// exp(-i (a X + b Y + c Z)).
Eigen::Matrix2cd su2(double a, double b, double c) {
  const double n = std::sqrt(a * a + b * b + c * c);
  if (n < 1e-300) return Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd gen = (a * pauli(Axis::kX) + b * pauli(Axis::kY) + c * pauli(Axis::kZ)) / n;
  return std::cos(n) * Eigen::Matrix2cd::Identity() - kI * std::sin(n) * gen;
}

}  // namespace

std::vector<int> native_qubits(const NativeOp& op) {
  return std::visit(Overloaded{
                        [](const CarrierRotation& r) { return std::vector<int>{r.qubit}; },
                        [](const CollectivePhase& c) { return c.qubits; },
                        [](const ZZCoupling& z) { return std::vector<int>{z.first, z.second}; },
                    },
                    op);
}

Matrix native_matrix(const NativeOp& op) {
  return std::visit(Overloaded{
                        [](const CarrierRotation& r) -> Matrix {
                          if (r.axis == Axis::kZ) throw ConfigError("carrier rotations are about x or y only");
                          return rotation(r.axis, r.angle);
                        },
                        [](const CollectivePhase& c) -> Matrix {
                          return collective_phase_gate(c.gamma, c.axis, static_cast<int>(c.qubits.size()));
                        },
                        [](const ZZCoupling& z) -> Matrix {
                          Vector d(4);
                          d << std::exp(-kI * z.angle), std::exp(kI * z.angle), std::exp(kI * z.angle),
                              std::exp(-kI * z.angle);
                          return d.asDiagonal();
                        },
                    },
                    op);
}

void apply_native(Vector& amplitudes, const HilbertLayout& layout, const NativeOp& op) {
  const auto qubits = native_qubits(op);
  apply_qubits(amplitudes, layout, native_matrix(op), qubits);
}

Matrix GatePlan::unitary() const {
  const HilbertLayout layout(n_qubits, 1);
  Matrix u = Matrix::Identity(layout.dim(), layout.dim());
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    Vector col = u.col(c);
    for (const auto& op : ops) apply_native(col, layout, op);
    u.col(c) = col;
  }
  return u;
}

double GatePlan::certified_fidelity() const {
  if (target.size() == 0) throw ConfigError("GatePlan has no target unitary");
  return certify(unitary(), target);
}

Eigen::Vector2cd ancilla_prep(Axis axis, int sign) {
  if (sign != 1 && sign != -1) throw ConfigError("ancilla_prep: sign must be +1 or -1");
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd v;
  switch (axis) {
    case Axis::kX: v << r, sign * r; break;
    case Axis::kY: v << r, cplx(0.0, sign * r); break;
    case Axis::kZ: v = sign > 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1); break;
  }
  return v;
}

SingleQubitGate single_qubit_gate(double gamma_angle, Axis axis, const Eigen::Vector2cd& ancilla) {
  const Eigen::Vector2cd image = pauli(axis) * ancilla;
  const cplx eig = ancilla.dot(image);
  const int sign = eig.real() >= 0.0 ? 1 : -1;
  if ((image - static_cast<double>(sign) * ancilla).norm() > 1e-10 || std::abs(ancilla.norm() - 1.0) > 1e-10) {
    throw PhysicsGuardError("ancilla_not_eigenstate", "ancilla is not a normalized eigenstate of sigma_" +
                                                          std::string(1, axis_name(axis)));
  }
  const Matrix u = collective_phase_gate(gamma_angle, axis, 2);  // qubit 0 = data, qubit 1 = ancilla
  SingleQubitGate out;
  Matrix ancilla_rho = Matrix::Zero(2, 2);
  double residual2 = 0.0;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2cd data = Eigen::Vector2cd::Zero();
    data[k] = 1.0;
    const Vector after = u * kron(data, ancilla);
    for (int j = 0; j < 2; ++j) out.gate(j, k) = ancilla.dot(after.segment(2 * j, 2));
    const Vector rest = after - kron(out.gate.col(k), ancilla);
    residual2 += rest.squaredNorm();
    const HilbertLayout two(2, 1);
    const Factor keep[] = {Factor::qubit(1)};
    ancilla_rho += 0.5 * partial_trace(StateVector(two, after), keep);
  }
  out.residual = std::sqrt(residual2);
  out.ancilla_marginal = ancilla_rho;
  out.expected = std::exp(2.0 * kI * gamma_angle) *
                 (std::cos(2.0 * gamma_angle) * Eigen::Matrix2cd::Identity() +
                  kI * (sign * std::sin(2.0 * gamma_angle)) * pauli(axis));
  return out;
}

SingleQubitGate single_qubit_gate(double gamma_angle, Axis axis, int sign) {
  return single_qubit_gate(gamma_angle, axis, ancilla_prep(axis, sign));
}

GatePlan compose(std::span<const GatePlan> plans) {
  GatePlan out;
  if (plans.empty()) {
    out.target = Matrix::Identity(1, 1);
    return out;
  }
  out.n_qubits = plans.front().n_qubits;
  out.roles = plans.front().roles;
  out.preparation = plans.front().preparation;
  const Eigen::Index dim = Eigen::Index{1} << out.n_qubits;
  out.target = Matrix::Identity(dim, dim);
  for (const auto& p : plans) {
    if (p.n_qubits != out.n_qubits) throw ConfigError("compose: plans act on different registers");
    out.ops.insert(out.ops.end(), p.ops.begin(), p.ops.end());
    out.target = (p.target.size() ? p.target : p.unitary()) * out.target;
  }
  return out;
}

double certify(const Matrix& u, const Matrix& v) { return phase_fidelity(u, v); }

// ---------------------------------------------------------------------------
// Local equivalence

namespace {

Eigen::Matrix4cd magic_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4cd q;
  q << r, 0, 0, kI * r,
       0, kI * r, r, 0,
       0, kI * r, -r, 0,
       r, 0, 0, -kI * r;
  return q;
}

}  // namespace

MakhlinInvariants makhlin_invariants(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) throw ConfigError("makhlin_invariants: expects a 4x4 unitary");
  if (unitarity_defect(u) > 1e-10) throw ConfigError("makhlin_invariants: input is not unitary");
  const Eigen::Matrix4cd q = magic_basis();
  const Eigen::Matrix4cd ub = q.adjoint() * u * q;
  const Eigen::Matrix4cd m = ub.transpose() * ub;
  const cplx det = u.determinant();
  const cplx tr = m.trace();
  const cplx tr2 = (m * m).trace();
  MakhlinInvariants out;
  out.g1 = tr * tr / (16.0 * det);
  out.g2 = ((tr * tr - tr2) / (4.0 * det)).real();
  return out;
}

bool locally_equivalent(const Matrix& u, const Matrix& v, double tol) {
  const auto a = makhlin_invariants(u);
  const auto b = makhlin_invariants(v);
  return std::abs(a.g1 - b.g1) <= tol && std::abs(a.g2 - b.g2) <= tol;
}

EulerXYX euler_xyx(const Eigen::Matrix2cd& u) {
  if (unitarity_defect(u) > 1e-10) throw ConfigError("euler_xyx: input is not unitary");
  // H Rx(t) H = Rz(t) and H Ry(t) H = Ry(-t): decompose H U H as Rz Ry Rz.
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Eigen::Matrix2cd v = h * u * h;
  EulerXYX out;
  out.phase = std::arg(v.determinant()) / 2.0;
  const Eigen::Matrix2cd w = std::exp(-kI * out.phase) * v;
  // w = [[e^{-i(a+c)} cos b, -e^{-i(a-c)} sin b], [e^{i(a-c)} sin b, e^{i(a+c)} cos b]]
  const double b = std::atan2(std::abs(w(1, 0)), std::abs(w(0, 0)));
  const double sum = std::abs(w(0, 0)) > 1e-12 ? -std::arg(w(0, 0)) : 0.0;
  const double diff = std::abs(w(1, 0)) > 1e-12 ? std::arg(w(1, 0)) : 0.0;
  out.middle = -b;
  if (std::abs(w(1, 0)) <= 1e-12) {
    // Pure x rotation: keep it in a single angle.
    out.first = sum;
    out.last = 0.0;
  } else {
    out.first = 0.5 * (sum + diff);
    out.last = 0.5 * (sum - diff);
  }
  return out;
}

std::vector<NativeOp> local_ops(int qubit, const Eigen::Matrix2cd& u) {
  const EulerXYX e = euler_xyx(u);
  std::vector<NativeOp> ops;
  constexpr double kSkip = 1e-12;
  if (std::abs(e.last) > kSkip) ops.emplace_back(CarrierRotation{qubit, Axis::kX, e.last});
  if (std::abs(e.middle) > kSkip) ops.emplace_back(CarrierRotation{qubit, Axis::kY, e.middle});
  if (std::abs(e.first) > kSkip) ops.emplace_back(CarrierRotation{qubit, Axis::kX, e.first});
  return ops;
}

Matrix cnot_matrix() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

Matrix cz_matrix() {
  Matrix m = Matrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

Matrix pair_coupling(double theta, Axis axis) {
  const Matrix pp = kron(pauli(axis), pauli(axis));
  return std::cos(theta) * Matrix::Identity(4, 4) + kI * std::sin(theta) * pp;
}

std::vector<double> cz_equivalence_locus(int samples, double tol) {
  if (samples < 1) throw ConfigError("cz_equivalence_locus: need at least one sample");
  std::vector<double> out;
  const Matrix cz = cz_matrix();
  for (int i = 0; i < samples; ++i) {
    const double theta = units::kPi * i / samples;
    if (locally_equivalent(pair_coupling(theta, Axis::kX), cz, tol)) out.push_back(theta);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CNOT synthesis

namespace {

struct LocalSearch {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  Matrix entangler;
  Matrix target;

  int inputs() const { return 13; }
  int values() const { return 32; }

  static Matrix locals(const Eigen::VectorXd& x, int offset) {
    return kron(su2(x[offset], x[offset + 1], x[offset + 2]), su2(x[offset + 3], x[offset + 4], x[offset + 5]));
  }

  Matrix product(const Eigen::VectorXd& x) const { return locals(x, 0) * entangler * locals(x, 6); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const Matrix r = product(x) - std::exp(kI * x[12]) * target;
    for (int i = 0; i < 16; ++i) {
      f[2 * i] = r(i / 4, i % 4).real();
      f[2 * i + 1] = r(i / 4, i % 4).imag();
    }
    return 0;
  }
};

}  // namespace

GatePlan cnot_plan(int control, int target, int n_qubits) {
  if (control == target || control < 0 || target < 0 || control >= n_qubits || target >= n_qubits) {
    throw ConfigError("cnot_plan: invalid control/target pair");
  }
  const CollectivePhase entangler{{control, target}, ms_gamma(units::kPi / 2.0), Axis::kX};
  LocalSearch search{native_matrix(entangler), cnot_matrix()};
  Eigen::NumericalDiff<LocalSearch, Eigen::Central> diff(search);

  std::mt19937_64 rng(0x5eed'c0de);
  std::uniform_real_distribution<double> angle(-units::kPi, units::kPi);
  Eigen::VectorXd best;
  double best_fid = -1.0;
  for (int attempt = 0; attempt < 64 && best_fid < 1.0 - 1e-13; ++attempt) {
    Eigen::VectorXd x(13);
    for (int i = 0; i < 13; ++i) x[i] = angle(rng);
    Eigen::LevenbergMarquardt<decltype(diff), double> lm(diff);
    lm.parameters.maxfev = 4000;
    lm.parameters.xtol = 1e-15;
    lm.parameters.ftol = 1e-15;
    lm.minimize(x);
    const double fid = certify(search.product(x), search.target);
    if (fid > best_fid) {
      best_fid = fid;
      best = x;
    }
  }
  if (best_fid < 1.0 - 1e-8) {
    throw PhysicsGuardError("certification_failed", "cnot_plan: local corrections not found");
  }

  GatePlan plan;
  plan.n_qubits = n_qubits;
  plan.roles.assign(static_cast<std::size_t>(n_qubits), QubitRole::kData);
  plan.preparation.assign(static_cast<std::size_t>(n_qubits), std::nullopt);
  auto append = [&](int qubit, const Eigen::Matrix2cd& u) {
    for (auto& op : local_ops(qubit, u)) plan.ops.push_back(std::move(op));
  };
  append(control, su2(best[6], best[7], best[8]));
  append(target, su2(best[9], best[10], best[11]));
  plan.ops.emplace_back(entangler);
  append(control, su2(best[0], best[1], best[2]));
  append(target, su2(best[3], best[4], best[5]));

  const int pair[] = {control, target};
  plan.target = embed_qubits(cnot_matrix(), pair, HilbertLayout(n_qubits, 1));
  if (plan.certified_fidelity() < 1.0 - 1e-8) {
    throw PhysicsGuardError("certification_failed", "cnot_plan: native realization does not certify");
  }
  return plan;
}

}  // namespace cavgeo
