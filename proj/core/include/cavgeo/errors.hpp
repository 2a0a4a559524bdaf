#pragma once

#include <stdexcept>
#include <string>

namespace cavgeo {

/// Malformed or inconsistent input (bad dimensions, unknown keys, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A physical-regime guard was violated (non-degenerate qubits where the
/// effective model needs them, Fock truncation leakage, open loops, ...).
class PhysicsGuardError : public std::runtime_error {
 public:
  PhysicsGuardError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Fock-space truncation is no longer safe; rerun with a larger cutoff.
class LeakageError : public PhysicsGuardError {
 public:
  LeakageError(double population, const std::string& what)
      : PhysicsGuardError("fock_leakage", what), population_(population) {}

  double population() const noexcept { return population_; }

 private:
  double population_;
};

/// The adaptive integrator could not meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cavgeo
