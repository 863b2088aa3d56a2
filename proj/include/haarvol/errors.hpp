#pragma once

#include <stdexcept>
#include <string>

namespace haarvol {

// Grid or replica budget exceeded. The CLI maps this to exit code 3.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Covariance matrix failed to factorize (not numerically positive definite,
// or a circulant embedding produced negative eigenvalues).
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistic cannot be formed from the data (e.g. all increments zero).
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or incomplete configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace haarvol
