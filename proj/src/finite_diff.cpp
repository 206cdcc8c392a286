#include "rlcthermo/finite_diff.hpp"

#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "rlcthermo/error.hpp"

namespace rlc {

namespace {

double sample(const std::function<double(double)>& f, double at) {
  double v = 0.0;
  try {
    v = f(at);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::StencilDomain,
                fmt::format("stencil point {:.17g} is outside the domain: {}", at, e.what()));
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::StencilDomain,
                fmt::format("stencil point {:.17g} gave a non-finite value", at));
  }
  return v;
}

}  // namespace

DerivativeEstimate finite_diff(const std::function<double(double)>& f, double x, double h) {
  if (!(h > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("bad stencil x={} h={}", x, h));
  }
  const double half = 0.5 * h;
  const double wide = (sample(f, x + h) - sample(f, x - h)) / (2.0 * h);
  const double narrow = (sample(f, x + half) - sample(f, x - half)) / h;
  return DerivativeEstimate{(4.0 * narrow - wide) / 3.0, h, std::abs(narrow - wide) / 3.0};
}

}  // namespace rlc
