#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace stratres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input (profile file, positivity, sample counts).
class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Argument outside the domain of an operation (e.g. |omega| below threshold).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The ODE integrator could not meet its tolerance.
class IntegrationError : public Error {
public:
  IntegrationError(const std::string& what, double worst_error, double z)
      : Error(what), worst_error_(worst_error), z_(z) {}

  /// Largest normalized local error estimate seen on the failing step.
  double worst_error() const noexcept { return worst_error_; }
  double position() const noexcept { return z_; }

private:
  double worst_error_;
  double z_;
};

/// Newton iteration failed; carries the best iterate found.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::complex<double> best)
      : Error(what), best_(best) {}

  std::complex<double> best_iterate() const noexcept { return best_; }

private:
  std::complex<double> best_;
};

/// Argument-principle contour could not be evaluated reliably.
class ContourError : public Error {
public:
  using Error::Error;
};

}  // namespace stratres
