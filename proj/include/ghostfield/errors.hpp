#pragma once

#include <stdexcept>
#include <string>

namespace ghostfield {

/// Thrown when the truncated Fock space cannot represent the requested
/// amplitude; carries the offending residual.
class TruncationError : public std::runtime_error {
  public:
    TruncationError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

/// Thrown when a quadrature result fails its convergence demand.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double est_error)
        : std::runtime_error(what), est_error_(est_error) {}
    double est_error() const { return est_error_; }

  private:
    double est_error_;
};

} // namespace ghostfield
