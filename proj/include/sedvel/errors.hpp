#pragma once

#include <stdexcept>
#include <string>

namespace sedvel {

/// Argument outside the mathematical domain of an operation (negative depth,
/// non-positive Vs30, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent input data (file parse failures, invalid
/// profiles, grids that do not cover a query).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (singular covariance, no convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sedvel
