#pragma once

#include <stdexcept>
#include <string>

namespace wishart {

/// Raised when a numerical routine cannot reach its accuracy contract
/// (series cap, quadrature failure, eigensolver sweeps, ODE step underflow).
class numeric_failure : public std::runtime_error {
 public:
  explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an exact algebraic audit fails (e.g. a Vandermonde division
/// that leaves a remainder). Always indicates a bug upstream.
class division_mismatch : public std::logic_error {
 public:
  explicit division_mismatch(const std::string& what) : std::logic_error(what) {}
};

}  // namespace wishart
