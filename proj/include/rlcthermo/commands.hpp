#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlcthermo/check_result.hpp"
#include "rlcthermo/config.hpp"
#include "rlcthermo/params.hpp"
#include "rlcthermo/thermal_oracle.hpp"
#include "rlcthermo/verifier.hpp"

namespace rlc {

inline constexpr std::string_view kToolName = "rlcthermo";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Exit codes shared by every command.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Shipped defaults with an optional user file merged on top. Unknown keys
/// and type mismatches in the user text throw a Config error.
Config load_config(std::optional<std::string_view> user_text = std::nullopt);

enum class OutputFormat { Csv, Json };
OutputFormat parse_output_format(std::string_view tag);

// ---- check suite ----------------------------------------------------------

struct SuiteSpec {
  CircuitParams base;  // hbar and k; L, C, R come from the grid
  std::vector<double> inductances;
  std::vector<double> capacitances;
  std::vector<double> resistance_fractions;  // of sqrt(L/C)
  std::vector<double> reduced_temperatures;  // beta hbar omega
  VerifierSettings settings;
  double closed_form_tolerance = 1e-6;
  double identity_tolerance = 1e-10;
  double operator_tolerance = 1e-10;
  double spacing_tolerance = 1e-8;
  /// Absolute entropy tolerance (in units of k) where S < 1e-3 k.
  double small_entropy_tolerance = 1e-9;
  std::size_t operator_dim = 64;
  std::size_t spacing_dim = 256;
  std::size_t spacing_levels = 64;
  std::vector<std::size_t> levels;
  std::vector<double> characteristic_scales;
};

SuiteSpec suite_spec_from_config(const Config& config);

struct SuiteReport {
  std::size_t grid_points = 0;
  /// Sorted by check name, then grid index.
  std::vector<CheckResult> checks;
  std::vector<LinearCoefficientProbe> probes;
};

/// Throws OverdampedDomain (or InvalidParameter) before any work if a grid
/// point is outside the underdamped domain.
SuiteReport run_check_suite(const SuiteSpec& spec);

// ---- sweeps ---------------------------------------------------------------

enum class SweepObservable { InternalEnergy, Entropy, Fluctuation, ResistorEnergy, DSdR, Omega };
std::string_view to_string(SweepObservable observable);
SweepObservable parse_sweep_observable(std::string_view tag);

/// Grid points closer than this fraction of sqrt(L/C) to critical damping
/// need allow_near_critical.
inline constexpr double kNearCriticalMargin = 1e-3;
/// Hard floor on the distance to critical damping, same units.
inline constexpr double kMinimumCriticalMargin = 1e-6;

struct SweepSpec {
  CircuitParams base;
  Parameter parameter = Parameter::Resistance;
  std::vector<double> values;  // absolute parameter values
  std::vector<double> betas;
  std::vector<SweepObservable> observables;
  bool cross_check = false;
  /// Observables that get an oracle column when cross_check is on; empty
  /// means all of them.
  std::vector<SweepObservable> cross_checked;
  bool allow_near_critical = false;
  LadderOptions ladder{32, 1024, 1e-14, 1e-4};
  double parameter_step = 1e-4;
};

struct SweepCell {
  double closed_form = 0.0;
  std::optional<double> oracle;
};

struct SweepRow {
  std::size_t index = 0;
  CircuitParams params;
  double beta = 0.0;
  std::vector<SweepCell> cells;  // one per requested observable
  std::optional<bool> converged;
  std::optional<std::size_t> n_used;
};

/// Throws OverdampedDomain for points outside the allowed margin.
void validate_sweep(const SweepSpec& spec);
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Entropy sweep over R at fixed beta; observables are entropy, omega, dS/dR.
SweepSpec sweep_entropy_spec_from_config(const Config& config);
SweepSpec sweep_spec_from_config(const Config& config);

std::string format_number(double value);
std::string entropy_sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

// ---- command front ends ---------------------------------------------------

struct CommandOutput {
  std::string content;  // report, CSV or JSON; written to --out
  std::string summary;  // short human-readable text
  int exit_code = kExitSuccess;
};

CommandOutput cmd_check(const Config& config);
CommandOutput cmd_sweep_entropy(const Config& config);
CommandOutput cmd_sweep(const Config& config);
CommandOutput cmd_convergence(const Config& config);

/// Dispatches by name ("check", "sweep-entropy", "sweep", "convergence").
/// Library errors are turned into an output with exit code 2 (bad input) or
/// 1 (numerical failure); nothing escapes.
CommandOutput run_command(std::string_view name, const Config& config);

}  // namespace rlc
