#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stirap {

// Base class for all domain errors. Each carries a stable machine-readable
// code string (used by the CLI for error records) plus a human message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Drive parameters place the pump at an exact interference zero of the
// coupled-cavity response; the mean-field division is undefined there.
struct SingularDenominator : Error {
  explicit SingularDenominator(const std::string& message)
      : Error("SingularDenominator", message) {}
};

// A schedule amplitude that must be strictly positive was not.
struct NonPositiveAmplitude : Error {
  explicit NonPositiveAmplitude(const std::string& message)
      : Error("NonPositiveAmplitude", message) {}
};

// The adiabatic spectrum contains no usable avoided crossing.
struct NoGapFound : Error {
  explicit NoGapFound(const std::string& message) : Error("NoGapFound", message) {}
};

// The adaptive integrator could not satisfy the requested error bounds.
struct ToleranceNotMet : Error {
  explicit ToleranceNotMet(const std::string& message)
      : Error("ToleranceNotMet", message) {}
};

// A moment or density state violates its physicality invariants by more than
// the allowed tolerance (signals an integrator or generator defect).
struct UnphysicalState : Error {
  explicit UnphysicalState(const std::string& message)
      : Error("UnphysicalState", message) {}
};

// Requested truncated Fock space exceeds the hard dimension guard.
struct DimensionGuard : Error {
  explicit DimensionGuard(const std::string& message)
      : Error("DimensionGuard", message) {}
};

// Population reached the top retained Fock level; the cutoff is too small for
// the requested scenario and the oracle result would not be trustworthy.
struct TruncationLeak : Error {
  explicit TruncationLeak(const std::string& message)
      : Error("TruncationLeak", message) {}
};

// The analytic sideband-cooling limit was requested outside its stability
// region.
struct Unstable : Error {
  explicit Unstable(const std::string& message) : Error("Unstable", message) {}
};

// Invalid configuration input (file contents, flag values, parameter ranges).
struct ConfigError : Error {
  explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

}  // namespace stirap
