#pragma once

#include <array>
#include <string>
#include <vector>

#include "cavgeo/qspace.hpp"

namespace cavgeo {

/// hbar = 1 throughout; time in ns, energies as angular frequencies in rad/ns.
namespace units {

inline constexpr double kHbarMicroEvNs = 0.65821;  // hbar in ueV * ns
inline constexpr double kPi = 3.14159265358979323846;

constexpr double from_micro_ev(double micro_ev) { return micro_ev / kHbarMicroEvNs; }
constexpr double to_micro_ev(double rad_per_ns) { return rad_per_ns * kHbarMicroEvNs; }

}  // namespace units

/// Josephson energies of the four junctions of one qubit (two SQUIDs a, b
/// with junctions 1, 2), in rad/ns.
struct JosephsonEnergies {
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;

  static JosephsonEnergies uniform(double e) { return {e, e, e, e}; }
};

struct QubitDevice {
  double charging_energy = 0.0;  ///< E_ch = 2e^2/C, rad/ns
  double induced_charge = 0.5;   ///< n-bar, dimensionless
  JosephsonEnergies josephson;
  double coupling = 0.0;  ///< g, dimensionless

  /// E_nbar = 2 E_ch (nbar - 1/2).
  double charge_detuning() const { return 2.0 * charging_energy * (induced_charge - 0.5); }
  bool at_degeneracy() const;
};

struct DeviceParams {
  double cavity_frequency = 0.0;  ///< omega_c, rad/ns
  std::vector<QubitDevice> qubits;

  static DeviceParams uniform(int n_qubits, double cavity_frequency, const QubitDevice& qubit);

  int n_qubits() const { return static_cast<int>(qubits.size()); }

  /// Throws ConfigError on non-positive energies or couplings.
  void validate() const;
  /// Soft guards (e.g. coupling above the Lamb-Dicke range).
  std::vector<std::string> warnings() const;
};

enum class DriveMode { kRamped, kStatic };

struct QubitDrive {
  double ramp_rate = 0.0;  ///< omega^phi, rad/ns (ramped mode)
  double offset = 0.0;     ///< beta^0, rad
  int branch = 0;          ///< k in {0, 1}; selects sigma_x (0) or sigma_y (1)
  double phi_plus = 0.0;   ///< static phi^+ (static mode)
  double phi_minus = 0.0;  ///< static phi^- (static mode)

  Axis axis() const { return branch == 0 ? Axis::kX : Axis::kY; }
};

struct DriveParams {
  DriveMode mode = DriveMode::kRamped;
  std::vector<QubitDrive> qubits;

  static DriveParams ramped(int n_qubits, double ramp_rate, double offset, int branch);
  static DriveParams static_flux(int n_qubits, double phi_plus, double phi_minus);

  /// delta_j = omega_c - omega_j^phi.
  double detuning(const DeviceParams& dev, int j) const;

  /// Throws ConfigError / PhysicsGuardError on inconsistent drive settings.
  void validate(const DeviceParams& dev) const;
  /// Reports |delta_j| > omega_j^phi / 5 and similar soft guards.
  std::vector<std::string> warnings(const DeviceParams& dev) const;
};

/// Reduced flux angles phi^+ and phi^- of qubit j at time t.
struct FluxAngles {
  double plus = 0.0;
  double minus = 0.0;
};
FluxAngles flux_angles(const DriveParams& drive, int j, double t);

/// H_0 = omega_c (a^dag a + 1/2) + sum_j E_nbar_j sigma_z^j / 2.
OperatorMatrix h_free(const DeviceParams& dev, const HilbertLayout& layout);

/// Lab-frame Josephson/cavity interaction H'_int(t), with operator-valued
/// phases exp(+-i[phi^+ + g(a + a^dag)]) evaluated exactly.
OperatorMatrix h_interaction_lab(const DeviceParams& dev, const DriveParams& drive,
                                 const HilbertLayout& layout, double t);

/// Full lab-frame Hamiltonian H_0 + H'_int(t).
OperatorMatrix h_lab(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                     double t);

/// H'_int(t) in the interaction picture of H_0: exp(iH_0 t) H'_int(t) exp(-iH_0 t).
Matrix h_lab_interaction_picture(const DeviceParams& dev, const DriveParams& drive,
                                 const HilbertLayout& layout, double t);

/// Precomputed lab-frame interaction. phi^- is constant in both drive modes
/// and each qubit's term is a first-degree trigonometric polynomial in
/// phi^+, so H'_int(t) is assembled from three fixed matrices per qubit.
class LabFrame {
 public:
  LabFrame(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout);

  /// Same as h_interaction_lab(dev, drive, layout, t).
  Matrix interaction(double t) const;
  /// Same as h_lab_interaction_picture(dev, drive, layout, t).
  Matrix interaction_picture(double t) const;

 private:
  DriveParams drive_;
  Vector energies_;                         // diagonal of H_0
  std::vector<std::array<Matrix, 3>> terms_;  // S (K0, K+, K-) per qubit
};

/// Parameters of one qubit's term in the effective Hamiltonian
/// lambda (a^dag e^{i(delta t + beta)} + h.c.) sigma^axis.
struct EffectiveCoupling {
  double lambda = 0.0;
  double detuning = 0.0;
  double offset = 0.0;
  Axis axis = Axis::kX;
};

/// lambda_j = g_j E_j. Requires a ramped drive, qubits at degeneracy and
/// equal junction energies per qubit; throws PhysicsGuardError otherwise.
std::vector<EffectiveCoupling> effective_couplings(const DeviceParams& dev, const DriveParams& drive);

/// Couplings that the lab-frame Hamiltonian reduces to at first order in g
/// under the rotating-wave approximation: lambda_j = (-1)^k g_j E_j / 2.
std::vector<EffectiveCoupling> rwa_effective_couplings(const DeviceParams& dev, const DriveParams& drive);

Matrix h_eff(std::span<const EffectiveCoupling> couplings, const HilbertLayout& layout, double t);
OperatorMatrix h_eff(const DeviceParams& dev, const DriveParams& drive, const HilbertLayout& layout,
                     double t);

/// Transverse rate of qubit j for static fluxes at g -> 0: the coefficient
/// Omega in Omega (e^{i phi^-/2}|1><0| + h.c.).
cplx carrier_rate(const QubitDevice& qubit, double phi_plus, double phi_minus);

/// Static-flux carrier Hamiltonian sum_j Omega_j sigma_j^axis; axis x uses
/// phi^- = 0, axis y uses phi^- = pi. Cavity factor is the identity.
OperatorMatrix h_carrier(const DeviceParams& dev, std::span<const double> phi_plus,
                         const HilbertLayout& layout, Axis axis);

}  // namespace cavgeo
