#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cavgeo/errors.hpp"
#include "cavgeo/model.hpp"
#include "cavgeo/propagate.hpp"
#include "cavgeo/qspace.hpp"

namespace cavgeo {

enum class PrepMode { kIdeal, kPulsed };

/// Device and drive used for pulsed preparation.
struct PulseSetup {
  DeviceParams device;
  DriveParams drive;
  EvolveOptions numerics;

  /// E = 40 ueV, omega_c = 30 ueV, delta = omega_c / 10, g = 1e-2, sigma_x branch.
  static PulseSetup reference(int n_qubits);
};

struct GhzOptions {
  PrepMode mode = PrepMode::kIdeal;
  std::optional<Vector> cavity;  ///< initial cavity state, vacuum if unset
  std::optional<PulseSetup> setup;
};

/// exp(i gamma J_x^2) angle used for GHZ preparation: ms_gamma(pi/2) shifted
/// by the J^2 period to a positive value (3pi/8 for even N, pi/8 for odd N).
double ghz_gamma(int n_qubits);

/// Even N: exp(i gamma J_x^2)|0...0>; odd N followed by exp(-i pi/4 J_x).
StateVector ghz_prepare(int n_qubits, const HilbertLayout& layout, const GhzOptions& opts = {});

/// (e^{-i pi/4}|0...0> + e^{i pi (1/4 + N/2)}|1...1>) / sqrt(2) on the register.
Vector ghz_target(int n_qubits);

/// <target|rho_q|target> of the qubit marginal. Odd N maximizes over the
/// relative phase of the two components.
double ghz_fidelity(const StateVector& state, int n_qubits);

struct Bipartition {
  std::vector<int> part;         ///< qubits on one side (always contains qubit 0)
  std::vector<double> spectrum;  ///< eigenvalues of the part's marginal, descending
};

/// Every bipartition of the register, spectrum of the side containing qubit 0.
std::vector<Bipartition> schmidt_spectra(const StateVector& state);
int schmidt_rank(const std::vector<double>& spectrum, double tol = 1e-10);

struct GhzReport {
  int n_qubits = 0;
  bool even = true;
  double fidelity = 0.0;
  std::vector<Bipartition> bipartitions;
  double phase_zero = 0.0;  ///< arg of the |0...0> amplitude
  double phase_one = 0.0;   ///< arg of the |1...1> amplitude
};

/// Phases are read at the Fock level that carries most of |0...0>.
GhzReport ghz_report(const StateVector& state, int n_qubits);

struct CavityInit {
  enum class Kind { kFock, kCoherent, kThermal };
  Kind kind = Kind::kFock;
  int fock = 0;
  cplx amplitude = 0.0;       ///< coherent alpha
  double mean_photons = 0.0;  ///< thermal n-bar

  static CavityInit fock_state(int n) { return {Kind::kFock, n, 0.0, 0.0}; }
  static CavityInit coherent(cplx a) { return {Kind::kCoherent, 0, a, 0.0}; }
  static CavityInit thermal(double nbar) { return {Kind::kThermal, 0, 0.0, nbar}; }

  std::string label() const;
  /// Pure components (weight, vector) of the cavity state at cutoff D.
  /// Thermal states are truncated below the top two levels and renormalized.
  std::vector<std::pair<double, Vector>> components(int fock_cutoff) const;
};

struct GateSpec {
  enum class Kind { kSinglePulse, kTwoPulse };
  Kind kind = Kind::kSinglePulse;
  PulseSetup setup;
  double duration = 0.0;  ///< t for a single pulse, tau for two pulses
};

struct InsensitivityRow {
  std::string label;
  double deviation = 0.0;  ///< max trace distance to the first init's channel
  double tail = 0.0;       ///< worst top-Fock-level population seen
};

struct InsensitivityReport {
  int fock_cutoff = 0;
  std::vector<InsensitivityRow> rows;
  double max_pairwise = 0.0;  ///< max over init pairs and random inputs
};

/// Qubit channel induced by the gate for each cavity init, compared over
/// `samples` random pure qubit inputs. Throws LeakageError when any output
/// populates the top two Fock levels above `leak_threshold`.
InsensitivityReport cavity_insensitivity_scan(const GateSpec& gate, std::span<const CavityInit> inits,
                                              int fock_cutoff, std::uint64_t seed, int samples = 50,
                                              double leak_threshold = 1e-8);

/// Calls fn(D); on LeakageError retries once with 2D.
template <class Fn>
auto with_fock_retry(int fock_cutoff, Fn&& fn) -> decltype(fn(fock_cutoff)) {
  try {
    return fn(fock_cutoff);
  } catch (const LeakageError&) {
    return fn(2 * fock_cutoff);
  }
}

}  // namespace cavgeo
