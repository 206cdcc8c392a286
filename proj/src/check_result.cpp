#include "rlcthermo/check_result.hpp"

#include <algorithm>
#include <cmath>

namespace rlc {

CheckResult make_check(std::string name, double lhs, double rhs, double tolerance,
                       CheckContext context, ToleranceMode mode, std::optional<double> scale) {
  CheckResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.abs_residual = std::abs(lhs - rhs);
  const double magnitude = scale.value_or(std::max(std::abs(lhs), std::abs(rhs)));
  r.rel_residual = r.abs_residual / std::max(magnitude, kResidualFloor);
  if (mode == ToleranceMode::Absolute) {
    r.pass = r.abs_residual < tolerance;
  } else {
    const bool near_zero = std::max(std::abs(lhs), std::abs(rhs)) < kNearZeroThreshold;
    r.pass = r.rel_residual < tolerance ||
             (near_zero && r.abs_residual < std::min(tolerance, kNearZeroThreshold));
  }
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) r.pass = false;
  r.context = std::move(context);
  if (r.context.inconclusive) r.pass = false;
  return r;
}

CheckResult mark_inconclusive(CheckResult result, std::string note) {
  result.context.inconclusive = true;
  if (!result.context.note.empty()) result.context.note += "; ";
  result.context.note += std::move(note);
  result.pass = false;
  return result;
}

}  // namespace rlc
