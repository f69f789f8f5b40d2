#pragma once

#include <stdexcept>
#include <string>

namespace ctkit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent inputs (dimension mismatch, non-finite entries, ...).
struct InvalidInput : Error {
  using Error::Error;
};

/// The drift matrix B has an eigenvalue with non-positive real part:
/// no Lyapunov metric exists and no contraction is possible.
struct NotStable : Error {
  using Error::Error;
};

/// B22 is singular in the Schur reduction.
struct Degenerate : Error {
  using Error::Error;
};

/// The Schur complement E is not symmetric positive definite.
struct AssumptionViolated : Error {
  using Error::Error;
};

/// The requested friction is below the certified threshold gamma0.
struct FrictionTooLow : Error {
  double gamma0;
  FrictionTooLow(double g0, const std::string& msg) : Error(msg), gamma0(g0) {}
};

/// Fluctuation-dissipation requested but B + B^T is not PSD.
struct FDViolation : Error {
  using Error::Error;
};

/// A trajectory left the admissible region (norm blow-up); reports the step.
struct Diverged : Error {
  long step;
  Diverged(long s, const std::string& msg) : Error(msg), step(s) {}
};

}  // namespace ctkit
