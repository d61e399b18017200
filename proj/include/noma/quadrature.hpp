#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace noma {

/// Raised when an adaptive quadrature cannot reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  unsigned max_depth = 30;
};

/// Adaptive Gauss-Kronrod (31 points) over the finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

/// Integral over [a, inf). Uses u = a + scale * t / (1 - t) with t in [0, 1).
double integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                             const QuadratureOptions& opts = {});

}  // namespace noma
