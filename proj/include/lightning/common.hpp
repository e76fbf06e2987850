#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lightning {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Base class for every error raised by the library. The message carries the
// short diagnostic tag ("branch cut", "pole collision", ...) used by callers.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an adaptive quadrature exhausts its evaluation budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, Complex partial, double est_error)
      : Error(what), partial_(partial), est_error_(est_error) {}

  Complex partial() const { return partial_; }
  double est_error() const { return est_error_; }

 private:
  Complex partial_;
  double est_error_;
};

}  // namespace lightning
