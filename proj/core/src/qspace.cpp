#include "cavgeo/qspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cavgeo/errors.hpp"

namespace cavgeo {

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::kX: return 'x';
    case Axis::kY: return 'y';
    case Axis::kZ: return 'z';
  }
  return '?';
}

Eigen::Matrix2cd pauli(Axis axis) {
  Eigen::Matrix2cd m;
  switch (axis) {
    case Axis::kX: m << 0, 1, 1, 0; break;
    case Axis::kY: m << 0, -kI, kI, 0; break;
    case Axis::kZ: m << 1, 0, 0, -1; break;
  }
  return m;
}

// ---------------------------------------------------------------------------
// HilbertLayout

HilbertLayout::HilbertLayout(int n_qubits, int fock_cutoff)
    : n_qubits_(n_qubits), fock_cutoff_(fock_cutoff) {
  if (n_qubits < 0 || n_qubits > 24) {
    throw ConfigError("HilbertLayout: qubit count must be in [0, 24], got " + std::to_string(n_qubits));
  }
  if (fock_cutoff < 1) {
    throw ConfigError("HilbertLayout: Fock cutoff must be positive, got " + std::to_string(fock_cutoff));
  }
}

Eigen::Index HilbertLayout::index(std::uint64_t qubit_word, int fock) const {
  if (qubit_word >= static_cast<std::uint64_t>(qubit_dim()) || fock < 0 || fock >= fock_cutoff_) {
    throw ConfigError("HilbertLayout::index out of range");
  }
  return static_cast<Eigen::Index>(qubit_word) * fock_cutoff_ + fock;
}

std::pair<std::uint64_t, int> HilbertLayout::decode(Eigen::Index index) const {
  if (index < 0 || index >= dim()) throw ConfigError("HilbertLayout::decode out of range");
  return {static_cast<std::uint64_t>(index / fock_cutoff_), static_cast<int>(index % fock_cutoff_)};
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(HilbertLayout layout, Vector amplitudes)
    : layout_(layout), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != layout_.dim()) {
    throw ConfigError("StateVector: amplitude count " + std::to_string(amplitudes_.size()) +
                      " does not match layout dimension " + std::to_string(layout_.dim()));
  }
  const double n = amplitudes_.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("StateVector: zero or non-finite norm");
  amplitudes_ /= n;
}

StateVector StateVector::basis(const HilbertLayout& layout, std::uint64_t qubit_word, int fock) {
  Vector v = Vector::Zero(layout.dim());
  v[layout.index(qubit_word, fock)] = 1.0;
  return {layout, std::move(v)};
}

StateVector StateVector::product(const HilbertLayout& layout, const Vector& qubits, const Vector& cavity) {
  if (qubits.size() != layout.qubit_dim() || cavity.size() != layout.fock_cutoff()) {
    throw ConfigError("StateVector::product: factor dimensions do not match layout");
  }
  return {layout, kron(qubits, cavity)};
}

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(HilbertLayout layout, Matrix entries)
    : layout_(layout), entries_(std::move(entries)) {
  if (entries_.rows() != layout_.dim() || entries_.cols() != layout_.dim()) {
    throw ConfigError("OperatorMatrix: matrix shape does not match layout dimension");
  }
}

OperatorMatrix::OperatorMatrix(const OperatorMatrix& other)
    : layout_(other.layout_),
      entries_(other.entries_),
      hermitian_(other.hermitian_.load()),
      unitary_(other.unitary_.load()) {}

OperatorMatrix& OperatorMatrix::operator=(const OperatorMatrix& other) {
  layout_ = other.layout_;
  entries_ = other.entries_;
  hermitian_ = other.hermitian_.load();
  unitary_ = other.unitary_.load();
  return *this;
}

OperatorMatrix::OperatorMatrix(OperatorMatrix&& other) noexcept
    : layout_(other.layout_),
      entries_(std::move(other.entries_)),
      hermitian_(other.hermitian_.load()),
      unitary_(other.unitary_.load()) {}

OperatorMatrix& OperatorMatrix::operator=(OperatorMatrix&& other) noexcept {
  layout_ = other.layout_;
  entries_ = std::move(other.entries_);
  hermitian_ = other.hermitian_.load();
  unitary_ = other.unitary_.load();
  return *this;
}

OperatorMatrix OperatorMatrix::identity(const HilbertLayout& layout) {
  OperatorMatrix op(layout, Matrix::Identity(layout.dim(), layout.dim()));
  op.hermitian_ = 1;
  op.unitary_ = 1;
  return op;
}

bool OperatorMatrix::is_hermitian() const {
  signed char cached = hermitian_.load();
  if (cached < 0) {
    const double defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    cached = defect < kHermitianTol ? 1 : 0;
    hermitian_.store(cached);
  }
  return cached == 1;
}

bool OperatorMatrix::is_unitary() const {
  signed char cached = unitary_.load();
  if (cached < 0) {
    cached = unitarity_defect(entries_) < kUnitaryTol ? 1 : 0;
    unitary_.store(cached);
  }
  return cached == 1;
}

StateVector OperatorMatrix::apply(const StateVector& psi) const {
  if (!(psi.layout() == layout_)) throw ConfigError("OperatorMatrix::apply: layout mismatch");
  return {layout_, entries_ * psi.amplitudes()};
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.layout_ == b.layout_)) throw ConfigError("OperatorMatrix product: layout mismatch");
  return {a.layout_, a.entries_ * b.entries_};
}

// ---------------------------------------------------------------------------
// Operator construction

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix annihilation(int fock_cutoff) {
  Matrix a = Matrix::Zero(fock_cutoff, fock_cutoff);
  for (int n = 1; n < fock_cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

OperatorMatrix tensor_embed(const Matrix& factor_op, Factor factor, const HilbertLayout& layout) {
  if (factor.is_cavity()) {
    if (factor_op.rows() != layout.fock_cutoff() || factor_op.cols() != layout.fock_cutoff()) {
      throw ConfigError("tensor_embed: cavity operator must be D x D");
    }
    return {layout, kron(Matrix::Identity(layout.qubit_dim(), layout.qubit_dim()), factor_op)};
  }
  if (factor.index < 0 || factor.index >= layout.n_qubits()) {
    throw ConfigError("tensor_embed: qubit index out of range");
  }
  if (factor_op.rows() != 2 || factor_op.cols() != 2) {
    throw ConfigError("tensor_embed: qubit operator must be 2 x 2");
  }
  const int q[] = {factor.index};
  return {layout, embed_qubits(factor_op, q, layout)};
}

namespace {

void check_qubit_list(std::span<const int> qubits, const HilbertLayout& layout, Eigen::Index op_dim) {
  if (op_dim != (Eigen::Index{1} << qubits.size())) {
    throw ConfigError("qubit operator dimension does not match the number of target qubits");
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= layout.n_qubits()) throw ConfigError("qubit index out of range");
    for (std::size_t k = 0; k < i; ++k) {
      if (qubits[k] == qubits[i]) throw ConfigError("repeated qubit index");
    }
  }
}

// Bit mask of the listed qubits inside a qubit word, and the small-operator
// index of a word restricted to them.
std::uint64_t sub_index(std::uint64_t word, std::span<const int> qubits, const HilbertLayout& layout) {
  std::uint64_t s = 0;
  for (int q : qubits) s = (s << 1) | static_cast<std::uint64_t>(layout.qubit_bit(word, q));
  return s;
}

std::uint64_t with_sub_index(std::uint64_t word, std::uint64_t s, std::span<const int> qubits,
                             const HilbertLayout& layout) {
  const int n = layout.n_qubits();
  const int k = static_cast<int>(qubits.size());
  for (int i = 0; i < k; ++i) {
    const std::uint64_t bit = (s >> (k - 1 - i)) & 1u;
    const int shift = n - 1 - qubits[i];
    word = (word & ~(std::uint64_t{1} << shift)) | (bit << shift);
  }
  return word;
}

}  // namespace

Matrix embed_qubits(const Matrix& op, std::span<const int> qubits, const HilbertLayout& layout) {
  check_qubit_list(qubits, layout, op.rows());
  const Eigen::Index nq = layout.qubit_dim();
  Matrix q = Matrix::Zero(nq, nq);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(nq); ++col) {
    const std::uint64_t sc = sub_index(col, qubits, layout);
    for (Eigen::Index sr = 0; sr < op.rows(); ++sr) {
      const cplx v = op(sr, static_cast<Eigen::Index>(sc));
      if (v == cplx{0.0}) continue;
      const std::uint64_t row = with_sub_index(col, static_cast<std::uint64_t>(sr), qubits, layout);
      q(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    }
  }
  const int d = layout.fock_cutoff();
  return d == 1 ? q : kron(q, Matrix::Identity(d, d));
}

void apply_qubits(Vector& amplitudes, const HilbertLayout& layout, const Matrix& op,
                  std::span<const int> qubits) {
  check_qubit_list(qubits, layout, op.rows());
  if (amplitudes.size() != layout.dim()) throw ConfigError("apply_qubits: state size mismatch");
  const Eigen::Index k = op.rows();
  const int d = layout.fock_cutoff();
  std::uint64_t mask = 0;
  for (int q : qubits) mask |= std::uint64_t{1} << (layout.n_qubits() - 1 - q);

  std::vector<std::uint64_t> words(static_cast<std::size_t>(k));
  Vector in(k), out(k);
  for (std::uint64_t base = 0; base < static_cast<std::uint64_t>(layout.qubit_dim()); ++base) {
    if (base & mask) continue;  // enumerate each orbit once via its all-zero representative
    for (Eigen::Index s = 0; s < k; ++s) {
      words[static_cast<std::size_t>(s)] = with_sub_index(base, static_cast<std::uint64_t>(s), qubits, layout);
    }
    for (int f = 0; f < d; ++f) {
      for (Eigen::Index s = 0; s < k; ++s) {
        in[s] = amplitudes[static_cast<Eigen::Index>(words[static_cast<std::size_t>(s)]) * d + f];
      }
      out.noalias() = op * in;
      for (Eigen::Index s = 0; s < k; ++s) {
        amplitudes[static_cast<Eigen::Index>(words[static_cast<std::size_t>(s)]) * d + f] = out[s];
      }
    }
  }
}

const Matrix& OperatorSet::sigma(Axis axis, int j) const {
  switch (axis) {
    case Axis::kX: return sx.at(static_cast<std::size_t>(j));
    case Axis::kY: return sy.at(static_cast<std::size_t>(j));
    case Axis::kZ: return sz.at(static_cast<std::size_t>(j));
  }
  throw ConfigError("unknown axis");
}

const Matrix& OperatorSet::collective(Axis axis) const {
  switch (axis) {
    case Axis::kX: return jx;
    case Axis::kY: return jy;
    case Axis::kZ: return jz;
  }
  throw ConfigError("unknown axis");
}

OperatorSet build_ops(const HilbertLayout& layout) {
  OperatorSet ops;
  ops.a = tensor_embed(annihilation(layout.fock_cutoff()), Factor::cavity(), layout).matrix();
  ops.adag = ops.a.adjoint();
  const Eigen::Index dim = layout.dim();
  ops.jx = ops.jy = ops.jz = Matrix::Zero(dim, dim);
  Eigen::Matrix2cd raise;
  raise << 0, 1, 0, 0;  // (sigma_x + i sigma_y) / 2
  for (int j = 0; j < layout.n_qubits(); ++j) {
    const int q[] = {j};
    ops.sx.push_back(embed_qubits(pauli(Axis::kX), q, layout));
    ops.sy.push_back(embed_qubits(pauli(Axis::kY), q, layout));
    ops.sz.push_back(embed_qubits(pauli(Axis::kZ), q, layout));
    ops.sp.push_back(embed_qubits(raise, q, layout));
    ops.sm.push_back(ops.sp.back().adjoint());
    ops.jx += ops.sx.back();
    ops.jy += ops.sy.back();
    ops.jz += ops.sz.back();
  }
  return ops;
}

// ---------------------------------------------------------------------------
// Partial trace

namespace {

struct TraceSplit {
  std::vector<int> kept_qubits;
  bool keep_cavity = false;
  Eigen::Index keep_dim = 1;
  Eigen::Index trace_dim = 1;
};

TraceSplit make_split(const HilbertLayout& layout, std::span<const Factor> keep) {
  if (keep.empty()) throw ConfigError("partial_trace: kept subset is empty");
  TraceSplit s;
  for (Factor f : keep) {
    if (f.is_cavity()) {
      s.keep_cavity = true;
    } else if (f.index < 0 || f.index >= layout.n_qubits()) {
      throw ConfigError("partial_trace: qubit index out of range");
    } else if (std::find(s.kept_qubits.begin(), s.kept_qubits.end(), f.index) == s.kept_qubits.end()) {
      s.kept_qubits.push_back(f.index);
    }
  }
  std::sort(s.kept_qubits.begin(), s.kept_qubits.end());
  const int traced_qubits = layout.n_qubits() - static_cast<int>(s.kept_qubits.size());
  s.keep_dim = (Eigen::Index{1} << s.kept_qubits.size()) * (s.keep_cavity ? layout.fock_cutoff() : 1);
  s.trace_dim = (Eigen::Index{1} << traced_qubits) * (s.keep_cavity ? 1 : layout.fock_cutoff());
  return s;
}

// (kept index, traced index) of a full basis index.
std::pair<Eigen::Index, Eigen::Index> split_index(const HilbertLayout& layout, const TraceSplit& s,
                                                  Eigen::Index full) {
  const auto [word, fock] = layout.decode(full);
  Eigen::Index kept = 0, traced = 0;
  std::size_t next = 0;
  for (int q = 0; q < layout.n_qubits(); ++q) {
    const int bit = layout.qubit_bit(word, q);
    if (next < s.kept_qubits.size() && s.kept_qubits[next] == q) {
      kept = (kept << 1) | bit;
      ++next;
    } else {
      traced = (traced << 1) | bit;
    }
  }
  if (s.keep_cavity) {
    kept = kept * layout.fock_cutoff() + fock;
  } else {
    traced = traced * layout.fock_cutoff() + fock;
  }
  return {kept, traced};
}

}  // namespace

Matrix partial_trace(const StateVector& psi, std::span<const Factor> keep) {
  const HilbertLayout& layout = psi.layout();
  const TraceSplit s = make_split(layout, keep);
  Matrix m = Matrix::Zero(s.keep_dim, s.trace_dim);
  for (Eigen::Index i = 0; i < layout.dim(); ++i) {
    const auto [k, t] = split_index(layout, s, i);
    m(k, t) = psi[i];
  }
  return m * m.adjoint();
}

Matrix partial_trace(const Matrix& rho, const HilbertLayout& layout, std::span<const Factor> keep) {
  if (rho.rows() != layout.dim() || rho.cols() != layout.dim()) {
    throw ConfigError("partial_trace: density matrix shape does not match layout");
  }
  const TraceSplit s = make_split(layout, keep);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> parts(static_cast<std::size_t>(layout.dim()));
  for (Eigen::Index i = 0; i < layout.dim(); ++i) parts[static_cast<std::size_t>(i)] = split_index(layout, s, i);
  Matrix out = Matrix::Zero(s.keep_dim, s.keep_dim);
  for (Eigen::Index i = 0; i < layout.dim(); ++i) {
    const auto [ki, ti] = parts[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < layout.dim(); ++j) {
      const auto [kj, tj] = parts[static_cast<std::size_t>(j)];
      if (ti == tj) out(ki, kj) += rho(i, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix exponential: Padé approximants of degree 3..13 with scaling and
// squaring (backward-error bounds of Higham 2005).

namespace {

constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

void pade_low(const Matrix& a, int degree, Matrix& u, Matrix& v) {
  static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
  static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
  static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                  2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  const double* b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix even_power = id;
  Matrix u_sum = b[1] * id;
  v = b[0] * id;
  for (int k = 2; k <= degree; k += 2) {
    even_power = even_power * a2;
    u_sum += b[k + 1] * even_power;
    v += b[k] * even_power;
  }
  u = a * u_sum;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  Matrix tmp = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u = a * (a6 * tmp + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  tmp = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * tmp + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix mat_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw ConfigError("mat_exp: matrix must be square");
  if (!a.allFinite()) throw std::overflow_error("mat_exp: non-finite input");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

  Matrix u, v;
  int squarings = 0;
  constexpr std::array<std::pair<int, double>, 4> kLow = {
      {{3, 1.495585217958292e-2}, {5, 2.539398330063230e-1}, {7, 9.504178996162932e-1}, {9, 2.097847961257068}}};
  bool done = false;
  for (const auto& [degree, theta] : kLow) {
    if (norm1 <= theta) {
      pade_low(a, degree, u, v);
      done = true;
      break;
    }
  }
  if (!done) {
    constexpr double kTheta13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / kTheta13))));
    if (squarings > 1000) throw std::overflow_error("mat_exp: norm too large");
    pade13(a / std::ldexp(1.0, squarings), u, v);
  }
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!r.allFinite()) throw std::overflow_error("mat_exp: result overflowed");
  return r;
}

OperatorMatrix mat_exp(const OperatorMatrix& a) { return {a.layout(), mat_exp(a.matrix())}; }

Matrix expm_action(const Matrix& a, const Matrix& block) {
  if (a.rows() != a.cols() || a.cols() != block.rows()) throw ConfigError("expm_action: shape mismatch");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm) || !block.allFinite()) throw std::overflow_error("expm_action: non-finite input");
  const int substeps = std::max(1, static_cast<int>(std::ceil(norm / 2.0)));
  const Matrix b = a / static_cast<double>(substeps);
  Matrix out = block;
  for (int s = 0; s < substeps; ++s) {
    Matrix term = out;
    Matrix sum = out;
    for (int k = 1; k <= 60; ++k) {
      term = (b * term) / static_cast<double>(k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-17 * sum.cwiseAbs().maxCoeff()) break;
    }
    out = std::move(sum);
  }
  return out;
}

Vector expm_action(const Matrix& a, const Vector& v) { return expm_action(a, Matrix(v)).col(0); }

Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases[i] = std::exp(-kI * (w[i] * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Figures of merit

double fidelity(const Vector& psi, const Vector& phi) {
  if (psi.size() != phi.size()) throw ConfigError("fidelity: dimension mismatch");
  return std::norm(phi.dot(psi));
}

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (!(psi.layout() == phi.layout())) throw ConfigError("fidelity: layout mismatch");
  return std::min(1.0, fidelity(psi.amplitudes(), phi.amplitudes()));
}

cplx overlap_phase(const StateVector& psi, const StateVector& phi) {
  if (!(psi.layout() == phi.layout())) throw ConfigError("overlap_phase: layout mismatch");
  return phi.amplitudes().dot(psi.amplitudes());
}

double phase_fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw ConfigError("phase_fidelity: shape mismatch");
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.cols());
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  const Matrix diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace cavgeo
