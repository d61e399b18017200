#include "noma/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <sstream>

namespace noma {

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, opts.max_depth, opts.rel_tol, &error, &l1);
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * l1);
  if (!std::isfinite(value) || !(error <= allowed)) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not converge: estimate " << value
        << ", error estimate " << error << " > " << allowed;
    throw QuadratureError(msg.str(), value, error);
  }
  return value;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                             const QuadratureOptions& opts) {
  auto mapped = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double u = a + scale * t / one_minus;
    const double v = f(u) * scale / (one_minus * one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

}  // namespace noma
