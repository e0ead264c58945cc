#pragma once

#include <stdexcept>
#include <string>

namespace filament {

// Bad inputs: wrong sizes, non-unit boundary vectors, unparsable configs.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The math went wrong at runtime: singular solve, iteration not converging.
// Carries the residual that triggered the failure when one is available.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace filament
