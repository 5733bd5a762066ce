#include "hberry/quadrature.hpp"

#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hberry/error.hpp"

namespace hberry {

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (a == b) return 0.0;
  double error = 0.0, l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, options.max_depth, options.rtol, &error, &l1);
  if (!std::isfinite(value))
    throw Error(ErrorCode::QuadratureFailure, "quadrature produced a non-finite value");
  const double allowed = std::max(options.rtol * l1, options.atol);
  if (error > allowed)
    throw Error(ErrorCode::QuadratureFailure,
                "quadrature error estimate " + std::to_string(error) + " exceeds tolerance");
  return value;
}

}  // namespace hberry
