#pragma once

#include <functional>

namespace hberry {

struct QuadratureOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  unsigned max_depth = 20;
};

/// Adaptive Gauss–Kronrod (15-point) integral of f over [a, b].
/// Throws QuadratureFailure when the error estimate exceeds max(rtol·∫|f|, atol).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});

}  // namespace hberry
