#pragma once

#include <functional>

namespace rlc {

struct DerivativeEstimate {
  double value = 0.0;
  double step = 0.0;
  double error_estimate = 0.0;
};

/// Central difference at steps h and h/2, combined by one Richardson step:
///   D(h) = (f(x+h) - f(x-h)) / 2h,  value = (4 D(h/2) - D(h)) / 3,
/// error_estimate = |D(h/2) - D(h)| / 3.
/// Any exception or non-finite value at a stencil point is reported as a
/// StencilDomain error naming that point.
DerivativeEstimate finite_diff(const std::function<double(double)>& f, double x, double h);

}  // namespace rlc
