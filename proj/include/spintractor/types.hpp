#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spintractor {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Spinor components with respect to a fixed spin frame.
using Spinor = Eigen::VectorXcd;

/// Identifies the frame gauge a spinor field is expressed in. Each metric
/// patch owns one gauge (its pseudo-orthonormal frame field).
using GaugeId = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// A computed quantity contradicts the fixed sign conventions (spacelike or
/// past-directed Dirac current, non-antisymmetric input, ...).
class ConventionViolation : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class NotASolution : public Error {
 public:
  using Error::Error;
};

class MissingDerivatives : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class GaugeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace spintractor
