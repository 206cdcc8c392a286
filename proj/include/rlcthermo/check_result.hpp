#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "rlcthermo/params.hpp"

namespace rlc {

inline constexpr double kResidualFloor = 1e-12;
inline constexpr double kNearZeroThreshold = 1e-9;

struct CheckContext {
  CircuitParams params;
  double beta = 0.0;
  std::optional<Parameter> parameter;
  std::size_t n_used = 0;
  /// Position of the point in the grid that produced the check.
  std::size_t grid_index = 0;
  bool converged = true;
  /// Set when the comparison could not be decided (non-converged oracle,
  /// ambiguous level tracking). Inconclusive results never pass.
  bool inconclusive = false;
  std::string note;
};

/// One identity verification: lhs vs rhs at a tolerance.
///
/// rel_residual = |lhs - rhs| / max(scale, 1e-12) where scale defaults to
/// max(|lhs|, |rhs|). A relative check passes when rel_residual < tolerance,
/// or, when both sides are below 1e-9 in magnitude, when the absolute
/// residual is below min(tolerance, 1e-9). An absolute check passes when
/// abs_residual < tolerance.
struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  CheckContext context;
};

enum class ToleranceMode { Relative, Absolute };

CheckResult make_check(std::string name, double lhs, double rhs, double tolerance,
                       CheckContext context, ToleranceMode mode = ToleranceMode::Relative,
                       std::optional<double> scale = std::nullopt);

/// Marks the result inconclusive (and therefore not passing).
CheckResult mark_inconclusive(CheckResult result, std::string note);

}  // namespace rlc
