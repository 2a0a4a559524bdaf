#include "cavgeo/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavgeo/errors.hpp"

namespace cavgeo {

namespace {

constexpr double kDegeneracyTol = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string qubit_label(int j) { return "qubit " + std::to_string(j); }

// |1><0|: exp(i Theta) raises the Cooper-pair number, i.e. it lowers sigma_z.
Matrix pair_raise() {
  Matrix s = Matrix::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

// Coefficient C of |1><0| in qubit j's Josephson term (a D x D cavity operator),
// written in the two-SQUID form with Gamma^l = phi^- + (-1)^{l-1}[phi^+ + g X].
Matrix josephson_coefficient(const QubitDevice& q, const FluxAngles& flux, const Matrix& x_quadrature) {
  const auto& ej = q.josephson;
  if (!nearly_equal(ej.a1, ej.b1) || !nearly_equal(ej.a2, ej.b2)) {
    throw PhysicsGuardError("junction_asymmetry",
                            "lab Hamiltonian requires E^{a l} = E^{b l} for both junction pairs");
  }
  const Eigen::Index d = x_quadrature.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix p = flux.plus * id + q.coupling * x_quadrature;
  // exp(i Gamma^1) = e^{i phi^-} e^{iP}, exp(i Gamma^2) = e^{i phi^-} e^{-iP}.
  const cplx eminus = std::exp(kI * flux.minus);
  const Matrix e_gamma1 = eminus * expm_hermitian(p, -1.0);
  const Matrix e_gamma2 = eminus * expm_hermitian(p, 1.0);
  const cplx half_phase = std::exp(-kI * (flux.minus / 2.0));
  const double energy[] = {ej.a1, ej.a2};
  const Matrix* gamma[] = {&e_gamma1, &e_gamma2};
  Matrix c = Matrix::Zero(d, d);
  for (int l = 1; l <= 2; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;  // (-1)^l
    c += (kI * sign * energy[l - 1] * half_phase) * (id - *gamma[l - 1]);
  }
  return -0.5 * c;
}

Matrix embed_josephson(const Matrix& coefficient, int j, const HilbertLayout& layout) {
  const int q[] = {j};
  const Matrix s = embed_qubits(pair_raise(), q, layout);
  const Matrix c = tensor_embed(coefficient, Factor::cavity(), layout).matrix();
  const Matrix term = s * c;
  return term + term.adjoint();
}

void require_qubits(const DeviceParams& dev, const HilbertLayout& layout) {
  if (dev.n_qubits() != layout.n_qubits()) {
    throw ConfigError("device has " + std::to_string(dev.n_qubits()) + " qubits but layout has " +
                      std::to_string(layout.n_qubits()));
  }
}

void require_drive(const DeviceParams& dev, const DriveParams& drive) {
  if (static_cast<int>(drive.qubits.size()) != dev.n_qubits()) {
    throw ConfigError("drive and device disagree on the number of qubits");
  }
}

}  // namespace

bool QubitDevice::at_degeneracy() const { return std::abs(induced_charge - 0.5) <= kDegeneracyTol; }

DeviceParams DeviceParams::uniform(int n_qubits, double cavity_frequency, const QubitDevice& qubit) {
  DeviceParams dev;
  dev.cavity_frequency = cavity_frequency;
  dev.qubits.assign(static_cast<std::size_t>(n_qubits), qubit);
  return dev;
}

void DeviceParams::validate() const {
  if (!(cavity_frequency > 0.0)) throw ConfigError("cavity frequency must be positive");
  if (qubits.empty()) throw ConfigError("device needs at least one qubit");
  for (int j = 0; j < n_qubits(); ++j) {
    const auto& q = qubits[static_cast<std::size_t>(j)];
    const auto& e = q.josephson;
    if (!(q.charging_energy > 0.0)) throw ConfigError(qubit_label(j) + ": charging energy must be positive");
    if (!(e.a1 > 0.0 && e.a2 > 0.0 && e.b1 > 0.0 && e.b2 > 0.0)) {
      throw ConfigError(qubit_label(j) + ": Josephson energies must be positive");
    }
    if (!(q.coupling > 0.0)) throw ConfigError(qubit_label(j) + ": coupling g must be positive");
  }
}

std::vector<std::string> DeviceParams::warnings() const {
  std::vector<std::string> out;
  for (int j = 0; j < n_qubits(); ++j) {
    const double g = qubits[static_cast<std::size_t>(j)].coupling;
    if (g > 0.1) {
      std::ostringstream os;
      os << qubit_label(j) << ": coupling g=" << g << " is outside the Lamb-Dicke range (0, 0.1]";
      out.push_back(os.str());
    }
  }
  return out;
}

DriveParams DriveParams::ramped(int n_qubits, double ramp_rate, double offset, int branch) {
  DriveParams d;
  d.mode = DriveMode::kRamped;
  QubitDrive q;
  q.ramp_rate = ramp_rate;
  q.offset = offset;
  q.branch = branch;
  d.qubits.assign(static_cast<std::size_t>(n_qubits), q);
  return d;
}

DriveParams DriveParams::static_flux(int n_qubits, double phi_plus, double phi_minus) {
  DriveParams d;
  d.mode = DriveMode::kStatic;
  QubitDrive q;
  q.phi_plus = phi_plus;
  q.phi_minus = phi_minus;
  d.qubits.assign(static_cast<std::size_t>(n_qubits), q);
  return d;
}

double DriveParams::detuning(const DeviceParams& dev, int j) const {
  return dev.cavity_frequency - qubits.at(static_cast<std::size_t>(j)).ramp_rate;
}

void DriveParams::validate(const DeviceParams& dev) const {
  require_drive(dev, *this);
  for (int j = 0; j < dev.n_qubits(); ++j) {
    const auto& q = qubits[static_cast<std::size_t>(j)];
    if (q.branch != 0 && q.branch != 1) throw ConfigError(qubit_label(j) + ": branch k must be 0 or 1");
    if (mode == DriveMode::kRamped) {
      if (!(q.ramp_rate > 0.0)) throw ConfigError(qubit_label(j) + ": ramp rate must be positive");
      if (detuning(dev, j) == 0.0) {
        throw PhysicsGuardError("resonant_drive", qubit_label(j) + ": detuning delta must be nonzero");
      }
    }
  }
}

std::vector<std::string> DriveParams::warnings(const DeviceParams& dev) const {
  std::vector<std::string> out;
  if (mode != DriveMode::kRamped) return out;
  for (int j = 0; j < dev.n_qubits(); ++j) {
    const double delta = detuning(dev, j);
    const double rate = qubits[static_cast<std::size_t>(j)].ramp_rate;
    if (std::abs(delta) > rate / 5.0) {
      std::ostringstream os;
      os << qubit_label(j) << ": |delta|/omega_phi = " << std::abs(delta) / rate
         << " exceeds 1/5; rotating-wave reduction is questionable";
      out.push_back(os.str());
    }
  }
  return out;
}

FluxAngles flux_angles(const DriveParams& drive, int j, double t) {
  const auto& q = drive.qubits.at(static_cast<std::size_t>(j));
  if (drive.mode == DriveMode::kStatic) return {q.phi_plus, q.phi_minus};
  // phi~a = w t - beta, phi~b = w t - beta - 2 k pi.
  const double a = q.ramp_rate * t - q.offset;
  const double b = a - 2.0 * units::kPi * q.branch;
  return {(a + b) / 2.0, (a - b) / 2.0};
}

OperatorMatrix h_free(const DeviceParams& dev, const HilbertLayout& layout) {
  require_qubits(dev, layout);
  const int d = layout.fock_cutoff();
  Matrix cav = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) cav(n, n) = dev.cavity_frequency * (n + 0.5);
  Matrix h = tensor_embed(cav, Factor::cavity(), layout).matrix();
  for (int j = 0; j < layout.n_qubits(); ++j) {
    const double e = dev.qubits[static_cast<std::size_t>(j)].charge_detuning();
    if (e == 0.0) continue;
    h += tensor_embed(0.5 * e * pauli(Axis::kZ), Factor::qubit(j), layout).matrix();
  }
  return {layout, std::move(h)};
}

OperatorMatrix h_interaction_lab(const DeviceParams& dev, const DriveParams& drive,
                                 const HilbertLayout& layout, double t) {
  require_qubits(dev, layout);
  require_drive(dev, drive);
  const Matrix a = annihilation(layout.fock_cutoff());
  const Matrix x = a + a.adjoint();
  Matrix h = Matrix::Zero(layout.dim(), layout.dim());
  for (int j = 0; j < layout.n_qubits(); ++j) {
    const auto& q = dev.qubits[static_cast<std::size_t>(j)];
    h += embed_josephson(josephson_coefficient(q, flux_angles(drive, j, t), x), j, layout);
  }
  return {layout, std::move(h)};
}

OperatorMatrix h_lab(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                     double t) {
  Matrix h = h_free(dev, layout).matrix() + h_interaction_lab(dev, drive, layout, t).matrix();
  return {layout, std::move(h)};
}

Matrix h_lab_interaction_picture(const DeviceParams& dev, const DriveParams& drive,
                                 const HilbertLayout& layout, double t) {
  const Matrix h0 = h_free(dev, layout).matrix();
  Matrix h = h_interaction_lab(dev, drive, layout, t).matrix();
  const Eigen::Index n = layout.dim();
  Vector phase(n);
  for (Eigen::Index i = 0; i < n; ++i) phase[i] = std::exp(kI * (h0(i, i).real() * t));
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) h(r, c) *= phase[r] * std::conj(phase[c]);
  }
  return h;
}

LabFrame::LabFrame(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout)
    : drive_(drive) {
  require_qubits(dev, layout);
  require_drive(dev, drive);
  energies_ = h_free(dev, layout).matrix().diagonal();
  const Matrix a = annihilation(layout.fock_cutoff());
  const Matrix x = a + a.adjoint();
  for (int j = 0; j < layout.n_qubits(); ++j) {
    const auto& q = dev.qubits[static_cast<std::size_t>(j)];
    const double minus = flux_angles(drive, j, 0.0).minus;
    // Recover C(phi+) = K0 + e^{i phi+} K+ + e^{-i phi+} K- from three samples.
    std::array<Matrix, 3> k;
    for (auto& m : k) m = Matrix::Zero(x.rows(), x.cols());
    for (int s = 0; s < 3; ++s) {
      const double theta = 2.0 * units::kPi * s / 3.0;
      const Matrix c = josephson_coefficient(q, {theta, minus}, x);
      k[0] += c / 3.0;
      k[1] += std::exp(-kI * theta) * c / 3.0;
      k[2] += std::exp(kI * theta) * c / 3.0;
    }
    const int qj[] = {j};
    const Matrix raise = embed_qubits(pair_raise(), qj, layout);
    std::array<Matrix, 3> t;
    for (int i = 0; i < 3; ++i) t[static_cast<std::size_t>(i)] = raise * tensor_embed(k[static_cast<std::size_t>(i)], Factor::cavity(), layout).matrix();
    terms_.push_back(std::move(t));
  }
}

Matrix LabFrame::interaction(double t) const {
  const Eigen::Index n = energies_.size();
  Matrix h = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const cplx e = std::exp(kI * flux_angles(drive_, static_cast<int>(j), t).plus);
    h += terms_[j][0] + e * terms_[j][1] + std::conj(e) * terms_[j][2];
  }
  return h + h.adjoint();
}

Matrix LabFrame::interaction_picture(double t) const {
  Matrix h = interaction(t);
  const Vector phase = (kI * t * energies_).array().exp();
  return phase.asDiagonal() * h * phase.conjugate().asDiagonal();
}

namespace {

std::vector<EffectiveCoupling> couplings_with_scale(const DeviceParams& dev, const DriveParams& drive,
                                                    bool rwa_scale) {
  require_drive(dev, drive);
  if (drive.mode != DriveMode::kRamped) {
    throw PhysicsGuardError("static_drive", "effective Hamiltonian requires a ramped flux drive");
  }
  drive.validate(dev);
  std::vector<EffectiveCoupling> out;
  for (int j = 0; j < dev.n_qubits(); ++j) {
    const auto& q = dev.qubits[static_cast<std::size_t>(j)];
    const auto& dq = drive.qubits[static_cast<std::size_t>(j)];
    if (!q.at_degeneracy()) {
      throw PhysicsGuardError("not_degenerate", qubit_label(j) + ": effective Hamiltonian requires nbar = 1/2");
    }
    const auto& e = q.josephson;
    if (!nearly_equal(e.a1, e.a2) || !nearly_equal(e.a1, e.b1) || !nearly_equal(e.a1, e.b2)) {
      throw PhysicsGuardError("junction_asymmetry",
                              qubit_label(j) + ": effective Hamiltonian requires equal junction energies");
    }
    EffectiveCoupling c;
    c.lambda = q.coupling * e.a1;
    if (rwa_scale) c.lambda *= (dq.branch == 0 ? 0.5 : -0.5);
    c.detuning = drive.detuning(dev, j);
    c.offset = dq.offset;
    c.axis = dq.axis();
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<EffectiveCoupling> effective_couplings(const DeviceParams& dev, const DriveParams& drive) {
  return couplings_with_scale(dev, drive, false);
}

std::vector<EffectiveCoupling> rwa_effective_couplings(const DeviceParams& dev, const DriveParams& drive) {
  return couplings_with_scale(dev, drive, true);
}

Matrix h_eff(std::span<const EffectiveCoupling> couplings, const HilbertLayout& layout, double t) {
  if (static_cast<int>(couplings.size()) != layout.n_qubits()) {
    throw ConfigError("h_eff: one coupling per qubit required");
  }
  const int d = layout.fock_cutoff();
  const Matrix a = annihilation(d);
  Matrix h = Matrix::Zero(layout.dim(), layout.dim());
  for (int j = 0; j < layout.n_qubits(); ++j) {
    const auto& c = couplings[static_cast<std::size_t>(j)];
    if (c.lambda == 0.0) continue;
    const cplx phase = std::exp(kI * (c.detuning * t + c.offset));
    const Matrix cav = c.lambda * (phase * a.adjoint() + std::conj(phase) * a);
    const int q[] = {j};
    h += kron(embed_qubits(pauli(c.axis), q, layout.with_cutoff(1)), cav);
  }
  return h;
}

OperatorMatrix h_eff(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                     double t) {
  require_qubits(dev, layout);
  const auto couplings = effective_couplings(dev, drive);
  return {layout, h_eff(couplings, layout, t)};
}

cplx carrier_rate(const QubitDevice& qubit, double phi_plus, double phi_minus) {
  const Matrix x = Matrix::Zero(1, 1);
  QubitDevice q = qubit;
  q.coupling = 0.0;
  const cplx c = josephson_coefficient(q, {phi_plus, phi_minus}, x)(0, 0);
  return c * std::exp(-kI * (phi_minus / 2.0));
}

OperatorMatrix h_carrier(const DeviceParams& dev, std::span<const double> phi_plus,
                         const HilbertLayout& layout, Axis axis) {
  require_qubits(dev, layout);
  if (static_cast<int>(phi_plus.size()) != layout.n_qubits()) {
    throw ConfigError("h_carrier: one phi^+ per qubit required");
  }
  if (axis == Axis::kZ) throw ConfigError("h_carrier: carrier rotations are about x or y only");
  const double phi_minus = axis == Axis::kX ? 0.0 : units::kPi;
  const Matrix x = Matrix::Zero(1, 1);
  Matrix h = Matrix::Zero(layout.dim(), layout.dim());
  for (int j = 0; j < layout.n_qubits(); ++j) {
    QubitDevice q = dev.qubits[static_cast<std::size_t>(j)];
    q.coupling = 0.0;
    const Matrix c = josephson_coefficient(q, {phi_plus[static_cast<std::size_t>(j)], phi_minus}, x);
    const Matrix cav = c(0, 0) * Matrix::Identity(layout.fock_cutoff(), layout.fock_cutoff());
    h += embed_josephson(cav, j, layout);
  }
  return {layout, std::move(h)};
}

}  // namespace cavgeo
