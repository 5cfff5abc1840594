#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace staleperc {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;

// Error hierarchy. The CLI maps each kind to a distinct exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (dimension mismatch, bad mode).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling ran out of its attempt budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// Absolute tolerance 1e-9 scaled by the magnitude of both sides.
inline double scaled_tolerance(double lhs, double rhs, double base = 1e-9) {
  return base * (1.0 + std::abs(lhs) + std::abs(rhs));
}

/// lhs >= rhs up to scaled_tolerance.
inline bool approx_ge(double lhs, double rhs, double base = 1e-9) {
  return lhs >= rhs - scaled_tolerance(lhs, rhs, base);
}

}  // namespace staleperc
