#pragma once

#include <stdexcept>
#include <string>

namespace specfit {

// Violated precondition or shape contract (bad flags, k not dividing m,
// dimension mismatch between a pencil and an input vector, ...).
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or incompatible input data (CSV parse failures, model files
// that do not match their declared shape, missing columns, ...).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Runtime numerical failure (eigensolver non-convergence, non-finite
// objective, every restart of a fit failing).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace specfit
