#include "rlcthermo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "parallel.hpp"
#include "rlcthermo/closed_forms.hpp"
#include "rlcthermo/error.hpp"
#include "rlcthermo/finite_diff.hpp"

namespace rlc {

namespace {

using Json = nlohmann::ordered_json;

constexpr Observable kTracked[] = {Observable::InternalEnergy, Observable::Entropy};

std::size_t count_of(const Config& c, const std::string& key, std::size_t minimum = 1) {
  const double v = c.number(key);
  if (!(v >= static_cast<double>(minimum)) || v != std::floor(v) || v > 1e9) {
    throw Error(ErrorCode::Config,
                fmt::format("config key '{}' must be an integer >= {} (got {})", key, minimum, v));
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> non_empty(const Config& c, const std::string& key) {
  auto v = c.numbers(key);
  if (v.empty()) throw Error(ErrorCode::Config, fmt::format("config key '{}' is empty", key));
  return v;
}

CircuitParams circuit_from(const Config& c) {
  CircuitParams p;
  p.inductance = c.number("circuit.L");
  p.capacitance = c.number("circuit.C");
  p.resistance = c.number("circuit.R");
  p.hbar = c.number("circuit.hbar");
  p.boltzmann = c.number("circuit.k");
  validate(p);
  return p;
}

LadderOptions ladder_from(const Config& c) {
  LadderOptions o;
  o.initial_dim = count_of(c, "oracle.initial_dim", 2);
  o.max_dim = count_of(c, "oracle.max_dim", 2);
  o.tail_tolerance = c.number("oracle.tail_tolerance");
  o.tolerance = c.number("oracle.ladder_tolerance");
  if (o.max_dim < o.initial_dim) {
    throw Error(ErrorCode::Config, "oracle.max_dim must be >= oracle.initial_dim");
  }
  return o;
}

std::vector<double> grid_from(const Config& c, const std::string& table) {
  auto explicit_values = c.numbers(table + ".values");
  if (!explicit_values.empty()) return explicit_values;
  const double start = c.number(table + ".start");
  const double stop = c.number(table + ".stop");
  const std::size_t count = count_of(c, table + ".count");
  std::vector<double> out(count, start);
  for (std::size_t i = 1; i < count; ++i) {
    out[i] = i + 1 == count ? stop
                            : start + (stop - start) * static_cast<double>(i) /
                                          static_cast<double>(count - 1);
  }
  return out;
}

Json params_json(const CircuitParams& p) {
  return Json{{"L", p.inductance}, {"C", p.capacitance}, {"R", p.resistance},
              {"hbar", p.hbar},    {"k", p.boltzmann}};
}

Json optional_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

Json check_json(const CheckResult& r) {
  const auto& c = r.context;
  Json ctx = params_json(c.params);
  ctx["beta"] = c.beta;
  ctx["parameter"] = c.parameter ? Json(std::string(to_string(*c.parameter))) : Json(nullptr);
  ctx["n_used"] = c.n_used;
  ctx["grid_index"] = c.grid_index;
  ctx["converged"] = c.converged;
  ctx["inconclusive"] = c.inconclusive;
  ctx["note"] = c.note;
  return Json{{"name", r.name},
              {"lhs", optional_number(r.lhs)},
              {"rhs", optional_number(r.rhs)},
              {"abs_residual", optional_number(r.abs_residual)},
              {"rel_residual", optional_number(r.rel_residual)},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"context", ctx}};
}

Json estimate_json(const DerivativeEstimate& d) {
  return Json{{"value", d.value}, {"step", d.step}, {"error_estimate", d.error_estimate}};
}

Json probe_json(const LinearCoefficientProbe& p) {
  return Json{{"params", params_json(p.params)},
              {"beta", p.beta},
              {"coefficients",
               {{"flux2", p.coefficients.flux2},
                {"charge2", p.coefficients.charge2},
                {"cross", p.coefficients.cross}}},
              {"dS_dflux2", estimate_json(p.dS_dflux2)},
              {"dS_dcharge2", estimate_json(p.dS_dcharge2)},
              {"dS_dcross", estimate_json(p.dS_dcross)},
              {"dS_dR_closed_form", p.dS_dR_closed_form},
              {"dS_dcross_chain_rule", p.dS_dcross_chain_rule},
              {"n_used", p.n_used},
              {"converged", p.converged}};
}

Json header_json(const Config& config, std::string_view command) {
  return Json{{"tool", kToolName},
              {"version", kToolVersion},
              {"config_hash", config.hash()},
              {"command", command}};
}

// ---- check suite pieces ---------------------------------------------------

struct GridPoint {
  std::size_t index = 0;
  CircuitParams params;
  double beta = 0.0;
};

struct PointOutcome {
  std::vector<CheckResult> checks;
  LinearCoefficientProbe probe;
};

CheckResult converged_or_flagged(CheckResult r, const FrozenOracle& o) {
  if (!o.converged()) return mark_inconclusive(std::move(r), "oracle did not converge");
  return r;
}

PointOutcome run_point(const SuiteSpec& spec, const GridPoint& g) {
  const auto& s = spec.settings;
  const auto& p = g.params;
  const double k = p.boltzmann;
  PointOutcome out;
  auto add = [&](CheckResult r) {
    r.context.grid_index = g.index;
    out.checks.push_back(std::move(r));
  };

  FrozenOracle o(p, g.beta, s.ladder);
  const auto& e = o.spectrum().energies;
  const auto& state = o.state();
  const auto ctx = o.context();

  const double u = internal_energy(state, e);
  add(converged_or_flagged(make_check("closed_form_internal_energy", u,
                                      internal_energy_cf(p, g.beta), spec.closed_form_tolerance,
                                      ctx),
                           o));
  const double s_cf = entropy_cf(p, g.beta);
  const double s_oracle = von_neumann_entropy(state, k);
  if (s_cf < 1e-3 * k) {
    add(converged_or_flagged(make_check("closed_form_entropy", s_oracle, s_cf,
                                        spec.small_entropy_tolerance * k, ctx,
                                        ToleranceMode::Absolute),
                             o));
  } else {
    add(converged_or_flagged(
        make_check("closed_form_entropy", s_oracle, s_cf, spec.closed_form_tolerance, ctx), o));
  }
  add(converged_or_flagged(make_check("closed_form_fluctuation", fluctuation(state, e),
                                      fluctuation_cf(p, g.beta), spec.closed_form_tolerance, ctx),
                           o));
  const double resistor =
      p.resistance * weighted_average(state, o.derivative_diagonal(Parameter::Resistance));
  add(converged_or_flagged(make_check("closed_form_resistor_energy", resistor,
                                      resistor_energy_cf(p, g.beta), spec.closed_form_tolerance,
                                      ctx),
                           o));

  const auto [free_identity, entropy_identity] = thermo_identities(state, o.spectrum(), k);
  for (const auto& r : {free_identity, entropy_identity}) {
    add(make_check(r.name, r.lhs, r.rhs, spec.identity_tolerance, ctx));
  }

  for (auto which : {Parameter::Inductance, Parameter::Capacitance, Parameter::Resistance}) {
    add(check_ensemble_derivative(o, which, s));
    add(check_energy_weighted_average(o, which, s));
    add(check_beta_derivative_form(o, which, s));
    add(check_entropy_variation(o, which, EntropyForm::Difference, s));
    add(check_entropy_variation(o, which, EntropyForm::BetaDerivative, s));
  }

  const double r0 = p.resistance;
  const auto ds_dr = finite_diff(
      [&](double v) {
        return von_neumann_entropy(thermal_state(o.energies_at(Parameter::Resistance, v), g.beta),
                                   k);
      },
      r0, s.parameter_step * std::max(1.0, std::abs(r0)));
  add(converged_or_flagged(make_check("entropy_variation_closed_form", ds_dr.value,
                                      dS_dR_cf(p, g.beta), s.ghft_tolerance,
                                      o.context(Parameter::Resistance)),
                           o));

  add(check_fluctuation(o, s));
  // The R-regularized PDE degenerates to 0 = 0 at R = 0; only interior points.
  if (p.resistance > 0.0) add(check_pde_residual(o, s));
  add(check_commutator_average(o, s));

  for (double scale : spec.characteristic_scales) {
    const CircuitParams partner{p.inductance * scale, p.capacitance / scale,
                                p.resistance * scale, p.hbar, p.boltzmann};
    add(check_characteristic_invariance(p, partner, g.beta, s));
  }

  out.probe = probe_linear_coefficients(o, s);
  return out;
}

std::vector<CheckResult> run_circuit(const SuiteSpec& spec, const GridPoint& g) {
  std::vector<CheckResult> out;
  auto add = [&](CheckResult r) {
    r.context.grid_index = g.index;
    out.push_back(std::move(r));
  };
  add(check_canonical_commutator(g.params, spec.operator_dim, spec.operator_tolerance));
  add(check_commutator_identity(g.params, spec.operator_dim, spec.operator_tolerance));
  add(check_level_spacing(g.params, spec.spacing_dim, spec.spacing_levels,
                          spec.spacing_tolerance));
  VerifierSettings level_settings = spec.settings;
  for (std::size_t level : spec.levels) {
    for (auto which : {Parameter::Inductance, Parameter::Capacitance, Parameter::Resistance}) {
      add(check_level_derivative(g.params, spec.operator_dim, level, which, level_settings));
    }
  }
  return out;
}

// ---- sweep pieces ---------------------------------------------------------

double closed_form(SweepObservable obs, const CircuitParams& p, double beta) {
  switch (obs) {
    case SweepObservable::InternalEnergy: return internal_energy_cf(p, beta);
    case SweepObservable::Entropy: return entropy_cf(p, beta);
    case SweepObservable::Fluctuation: return fluctuation_cf(p, beta);
    case SweepObservable::ResistorEnergy: return resistor_energy_cf(p, beta);
    case SweepObservable::DSdR: return dS_dR_cf(p, beta);
    case SweepObservable::Omega: return omega(p).omega;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool needs_frozen_basis(SweepObservable obs) {
  return obs == SweepObservable::ResistorEnergy || obs == SweepObservable::DSdR;
}

bool is_cross_checked(const SweepSpec& spec, SweepObservable obs) {
  if (!spec.cross_check) return false;
  return spec.cross_checked.empty() ||
         std::find(spec.cross_checked.begin(), spec.cross_checked.end(), obs) !=
             spec.cross_checked.end();
}

SweepRow evaluate_row(const SweepSpec& spec, std::size_t index, const CircuitParams& p,
                      double beta) {
  SweepRow row;
  row.index = index;
  row.params = p;
  row.beta = beta;
  for (auto obs : spec.observables) row.cells.push_back({closed_form(obs, p, beta), std::nullopt});

  bool any = false;
  bool frozen = false;
  for (auto obs : spec.observables) {
    if (is_cross_checked(spec, obs)) {
      any = true;
      frozen = frozen || needs_frozen_basis(obs);
    }
  }
  if (!any) return row;

  const double k = p.boltzmann;
  auto fill = [&](const std::vector<double>& e, const ThermalState& state,
                  const ConvergenceReport& report, FrozenOracle* oracle) {
    for (std::size_t i = 0; i < spec.observables.size(); ++i) {
      const auto obs = spec.observables[i];
      if (!is_cross_checked(spec, obs)) continue;
      double v = 0.0;
      switch (obs) {
        case SweepObservable::InternalEnergy: v = internal_energy(state, e); break;
        case SweepObservable::Entropy: v = von_neumann_entropy(state, k); break;
        case SweepObservable::Fluctuation: v = fluctuation(state, e); break;
        case SweepObservable::Omega: v = (e[1] - e[0]) / p.hbar; break;
        case SweepObservable::ResistorEnergy:
          v = p.resistance *
              weighted_average(state, oracle->derivative_diagonal(Parameter::Resistance));
          break;
        case SweepObservable::DSdR: {
          const double r0 = p.resistance;
          v = finite_diff(
                  [&](double r) {
                    return von_neumann_entropy(
                        thermal_state(oracle->energies_at(Parameter::Resistance, r), beta), k);
                  },
                  r0, spec.parameter_step * std::max(1.0, std::abs(r0)))
                  .value;
          break;
        }
      }
      row.cells[i].oracle = v;
    }
    row.converged = report.converged;
    row.n_used = report.n_used;
  };

  if (frozen) {
    FrozenOracle oracle(p, beta, spec.ladder);
    fill(oracle.spectrum().energies, oracle.state(), oracle.report(), &oracle);
  } else {
    const auto sol = solve_converged(p, beta, kTracked, spec.ladder);
    fill(sol.spectrum.energies, sol.state, sol.report, nullptr);
  }
  return row;
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::string row_prefix(const SweepRow& r) {
  return fmt::format("{},{},{},{},{}", r.index, format_number(r.params.inductance),
                     format_number(r.params.capacitance), format_number(r.params.resistance),
                     format_number(r.beta));
}

std::string row_suffix(const SweepRow& r) {
  return fmt::format("{},{}", r.converged ? (*r.converged ? "true" : "false") : "",
                     r.n_used ? std::to_string(*r.n_used) : "");
}

std::vector<std::string> sweep_columns(const SweepSpec& spec) {
  std::vector<std::string> cols{"index", "L", "C", "R", "beta"};
  for (auto obs : spec.observables) {
    cols.push_back(fmt::format("{}_cf", to_string(obs)));
    cols.push_back(fmt::format("{}_oracle", to_string(obs)));
  }
  cols.emplace_back("converged");
  cols.emplace_back("N_used");
  return cols;
}

Json row_json(const std::vector<std::string>& columns, const std::vector<std::string>& cells) {
  Json row = Json::object();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto& c = cells[i];
    if (c.empty()) {
      row[columns[i]] = nullptr;
    } else if (c == "true" || c == "false") {
      row[columns[i]] = c == "true";
    } else if (columns[i] == "index" || columns[i] == "N_used") {
      row[columns[i]] = std::stoull(c);
    } else {
      row[columns[i]] = std::stod(c);
    }
  }
  return row;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Renders CSV text as the equivalent JSON document.
std::string csv_to_json(const std::string& csv, Json doc) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < csv.size()) {
    const auto end = csv.find('\n', start);
    lines.push_back(csv.substr(start, end - start));
    start = end == std::string::npos ? csv.size() : end + 1;
  }
  const auto columns = split_csv_line(lines.front());
  doc["columns"] = columns;
  Json rows = Json::array();
  for (std::size_t i = 1; i < lines.size(); ++i) {
    rows.push_back(row_json(columns, split_csv_line(lines[i])));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

OutputFormat format_from(const Config& c) { return parse_output_format(c.string("output.format")); }

std::string family_table(const std::vector<CheckResult>& checks) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& r : checks) {
    auto& [passed, total] = counts[r.name];
    passed += r.pass ? 1 : 0;
    ++total;
  }
  std::string out = fmt::format("  {:<34} {:>7} {:>7}\n", "family", "passed", "total");
  for (const auto& [name, c] : counts) {
    out += fmt::format("  {:<34} {:>7} {:>7}\n", name, c.first, c.second);
  }
  return out;
}

}  // namespace

Config load_config(std::optional<std::string_view> user_text) {
  Config config = Config::parse(default_config_text());
  if (user_text) config.merge(Config::parse(*user_text), true);
  return config;
}

OutputFormat parse_output_format(std::string_view tag) {
  if (tag == "csv") return OutputFormat::Csv;
  if (tag == "json") return OutputFormat::Json;
  throw Error(ErrorCode::UnknownTag, fmt::format("unknown output format '{}'", tag));
}

SuiteSpec suite_spec_from_config(const Config& c) {
  SuiteSpec s;
  s.base = circuit_from(c);
  s.inductances = non_empty(c, "check.L");
  s.capacitances = non_empty(c, "check.C");
  s.resistance_fractions = non_empty(c, "check.R_fraction");
  s.reduced_temperatures = non_empty(c, "check.beta_hbar_omega");
  s.settings.ladder = ladder_from(c);
  s.settings.parameter_step = c.number("stencil.parameter_step");
  s.settings.beta_step = c.number("stencil.beta_step");
  s.settings.level_tolerance = c.number("check.level_tolerance");
  s.settings.ghft_tolerance = c.number("check.ghft_tolerance");
  s.settings.pde_tolerance = c.number("check.pde_tolerance");
  s.settings.characteristic_tolerance = c.number("check.characteristic_tolerance");
  s.settings.commutator_tolerance = c.number("check.commutator_tolerance");
  s.closed_form_tolerance = c.number("check.closed_form_tolerance");
  s.identity_tolerance = c.number("check.identity_tolerance");
  s.operator_tolerance = c.number("check.operator_tolerance");
  s.spacing_tolerance = c.number("check.spacing_tolerance");
  s.operator_dim = count_of(c, "check.operator_dim", 4);
  s.spacing_dim = count_of(c, "check.spacing_dim", 2);
  s.spacing_levels = count_of(c, "check.spacing_levels");
  for (double level : c.numbers("check.levels")) {
    if (level < 0 || level != std::floor(level)) {
      throw Error(ErrorCode::Config, fmt::format("check.levels entry {} is not a level", level));
    }
    s.levels.push_back(static_cast<std::size_t>(level));
  }
  s.characteristic_scales = c.numbers("check.characteristic_scales");
  for (double scale : s.characteristic_scales) {
    if (!(scale > 0.0)) throw Error(ErrorCode::Config, "characteristic scales must be > 0");
  }

  const double override_tolerance = c.number("check.tolerance");
  if (override_tolerance >= 0.0) {
    s.settings.level_tolerance = s.settings.ghft_tolerance = s.settings.pde_tolerance =
        s.settings.characteristic_tolerance = s.settings.commutator_tolerance =
            s.closed_form_tolerance = s.identity_tolerance = s.operator_tolerance =
                s.spacing_tolerance = s.small_entropy_tolerance = override_tolerance;
  }
  return s;
}

SuiteReport run_check_suite(const SuiteSpec& spec) {
  std::vector<GridPoint> points;
  std::vector<GridPoint> circuits;
  for (double L : spec.inductances) {
    for (double C : spec.capacitances) {
      for (double rho : spec.resistance_fractions) {
        CircuitParams p = spec.base;
        p.inductance = L;
        p.capacitance = C;
        validate(CircuitParams{L, C, 0.0, p.hbar, p.boltzmann});
        p.resistance = rho * critical_resistance(p);
        validate(p);
        if (!(rho < 1.0)) {
          throw Error(ErrorCode::OverdampedDomain,
                      fmt::format("grid point {} is not underdamped (R = {} sqrt(L/C))",
                                  describe(p), rho));
        }
        const double quantum = p.hbar * omega(p).omega;
        circuits.push_back({points.size(), p, 0.0});
        for (double x : spec.reduced_temperatures) {
          if (!(x > 0.0) || !std::isfinite(x)) {
            throw Error(ErrorCode::InvalidParameter,
                        fmt::format("beta hbar omega must be > 0 (got {})", x));
          }
          points.push_back({points.size(), p, x / quantum});
        }
      }
    }
  }
  for (std::size_t level : spec.levels) {
    if (level >= spec.operator_dim / 4) {
      throw Error(ErrorCode::Precondition, fmt::format("level {} is not below operator_dim/4 = {}",
                                                       level, spec.operator_dim / 4));
    }
  }

  SuiteReport report;
  report.grid_points = points.size();
  auto outcomes =
      detail::parallel_map(points.size(), [&](std::size_t i) { return run_point(spec, points[i]); });
  auto operator_checks = detail::parallel_map(
      circuits.size(), [&](std::size_t i) { return run_circuit(spec, circuits[i]); });
  for (auto& o : outcomes) {
    for (auto& r : o.checks) report.checks.push_back(std::move(r));
    report.probes.push_back(std::move(o.probe));
  }
  for (auto& group : operator_checks) {
    for (auto& r : group) report.checks.push_back(std::move(r));
  }
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     if (a.name != b.name) return a.name < b.name;
                     return a.context.grid_index < b.context.grid_index;
                   });
  return report;
}

std::string_view to_string(SweepObservable observable) {
  switch (observable) {
    case SweepObservable::InternalEnergy: return "internal_energy";
    case SweepObservable::Entropy: return "entropy";
    case SweepObservable::Fluctuation: return "fluctuation";
    case SweepObservable::ResistorEnergy: return "resistor_energy";
    case SweepObservable::DSdR: return "dS_dR";
    case SweepObservable::Omega: return "omega";
  }
  return "?";
}

SweepObservable parse_sweep_observable(std::string_view tag) {
  for (auto o : {SweepObservable::InternalEnergy, SweepObservable::Entropy,
                 SweepObservable::Fluctuation, SweepObservable::ResistorEnergy,
                 SweepObservable::DSdR, SweepObservable::Omega}) {
    if (to_string(o) == tag) return o;
  }
  throw Error(ErrorCode::UnknownTag, fmt::format("unknown observable '{}'", tag));
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.values.empty() || spec.betas.empty()) {
    throw Error(ErrorCode::Config, "sweep grid is empty");
  }
  if (spec.observables.empty()) throw Error(ErrorCode::Config, "no observables requested");
  for (double beta : spec.betas) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw Error(ErrorCode::InvalidParameter, fmt::format("beta must be > 0 (got {})", beta));
    }
  }
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const auto p = with_parameter(spec.base, spec.parameter, spec.values[i]);
    validate(p);
    const double critical = critical_resistance(p);
    const double margin = critical - p.resistance;
    if (!(margin > 0.0)) {
      throw Error(ErrorCode::OverdampedDomain,
                  fmt::format("grid value {} ({}) is not underdamped: R >= sqrt(L/C) = {}", i,
                              describe(p), critical));
    }
    if (margin < kNearCriticalMargin * critical && !spec.allow_near_critical) {
      throw Error(ErrorCode::OverdampedDomain,
                  fmt::format("grid value {} ({}) is within {} sqrt(L/C) of critical damping; "
                              "set allow_near_critical to include it",
                              i, describe(p), kNearCriticalMargin));
    }
    // Slack for rounding in R = (1 - 1e-6) sqrt(L/C).
    if (margin < kMinimumCriticalMargin * critical * (1.0 - 1e-8)) {
      throw Error(ErrorCode::OverdampedDomain,
                  fmt::format("grid value {} ({}) is closer than {} sqrt(L/C) to critical damping",
                              i, describe(p), kMinimumCriticalMargin));
    }
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  const std::size_t nb = spec.betas.size();
  return detail::parallel_map(spec.values.size() * nb, [&](std::size_t i) {
    const auto p = with_parameter(spec.base, spec.parameter, spec.values[i / nb]);
    return evaluate_row(spec, i, p, spec.betas[i % nb]);
  });
}

SweepSpec sweep_entropy_spec_from_config(const Config& c) {
  SweepSpec s;
  s.base = circuit_from(c);
  s.parameter = Parameter::Resistance;
  s.values = grid_from(c, "sweep_entropy");
  if (c.boolean("sweep_entropy.relative")) {
    const double critical = critical_resistance(s.base);
    for (double& v : s.values) v *= critical;
  }
  s.betas = {c.number("sweep_entropy.beta")};
  s.observables = {SweepObservable::Omega, SweepObservable::Entropy, SweepObservable::DSdR};
  s.cross_check = c.boolean("sweep_entropy.cross_check");
  s.cross_checked = {SweepObservable::Entropy};
  s.allow_near_critical = c.boolean("sweep_entropy.allow_near_critical");
  s.ladder = ladder_from(c);
  s.parameter_step = c.number("stencil.parameter_step");
  return s;
}

SweepSpec sweep_spec_from_config(const Config& c) {
  SweepSpec s;
  s.base = circuit_from(c);
  s.parameter = parse_parameter(c.string("sweep.parameter"));
  s.values = grid_from(c, "sweep");
  if (c.boolean("sweep.relative")) {
    const double unit = s.parameter == Parameter::Resistance
                            ? critical_resistance(s.base)
                            : parameter_value(s.base, s.parameter);
    for (double& v : s.values) v *= unit;
  }
  const auto temperatures = c.numbers("sweep.temperature");
  if (!temperatures.empty()) {
    for (double t : temperatures) {
      if (!(t > 0.0)) {
        throw Error(ErrorCode::InvalidParameter, fmt::format("temperature must be > 0 (got {})", t));
      }
      s.betas.push_back(1.0 / (s.base.boltzmann * t));
    }
  } else {
    s.betas = c.numbers("sweep.beta");
  }
  for (const auto& tag : c.strings("sweep.observables")) {
    s.observables.push_back(parse_sweep_observable(tag));
  }
  s.cross_check = c.boolean("sweep.cross_check");
  s.allow_near_critical = c.boolean("sweep.allow_near_critical");
  s.ladder = ladder_from(c);
  s.parameter_step = c.number("stencil.parameter_step");
  return s;
}

std::string format_number(double value) { return fmt::format("{:.16e}", value); }

std::string entropy_sweep_csv(const std::vector<SweepRow>& rows) {
  // Cells are ordered omega, entropy, dS/dR.
  std::string out = "index,L,C,R,beta,omega,S_cf,S_oracle,dSdR_cf,converged,N_used\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", row_prefix(r), format_number(r.cells[0].closed_form),
                       format_number(r.cells[1].closed_form), csv_cell(r.cells[1].oracle),
                       format_number(r.cells[2].closed_form), row_suffix(r));
  }
  return out;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  const auto cols = sweep_columns(spec);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  out += "\n";
  for (const auto& r : rows) {
    out += row_prefix(r);
    for (const auto& cell : r.cells) {
      out += fmt::format(",{},{}", format_number(cell.closed_form), csv_cell(cell.oracle));
    }
    out += "," + row_suffix(r) + "\n";
  }
  return out;
}

CommandOutput cmd_check(const Config& config) {
  const auto spec = suite_spec_from_config(config);
  const auto report = run_check_suite(spec);

  Json doc = header_json(config, "check");
  Json checks = Json::array();
  for (const auto& r : report.checks) checks.push_back(check_json(r));
  doc["checks"] = std::move(checks);
  Json probes = Json::array();
  for (const auto& p : report.probes) probes.push_back(probe_json(p));
  doc["linear_coefficient_probes"] = std::move(probes);

  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::string failures;
  for (const auto& r : report.checks) {
    if (r.context.inconclusive) ++inconclusive;
    if (r.pass) continue;
    if (++failed <= 20) {
      failures += fmt::format("  FAIL {} [grid {}] {}: lhs={:.10g} rhs={:.10g} rel={:.3g} tol={:.3g}{}\n",
                              r.name, r.context.grid_index, describe(r.context.params), r.lhs,
                              r.rhs, r.rel_residual, r.tolerance,
                              r.context.note.empty() ? "" : " (" + r.context.note + ")");
    }
  }
  CommandOutput out;
  out.content = doc.dump(2) + "\n";
  out.exit_code = failed == 0 ? kExitSuccess : kExitCheckFailure;
  out.summary = fmt::format("check: {} grid points, {} checks, {} failed ({} inconclusive), {} probes\n",
                            report.grid_points, report.checks.size(), failed, inconclusive,
                            report.probes.size());
  out.summary += family_table(report.checks);
  if (failed > 20) failures += fmt::format("  ... {} more failures\n", failed - 20);
  out.summary += failures;
  out.summary += failed == 0 ? "result: PASS\n" : "result: FAIL\n";
  return out;
}

CommandOutput cmd_sweep_entropy(const Config& config) {
  const auto format = format_from(config);
  const auto spec = sweep_entropy_spec_from_config(config);
  const auto rows = run_sweep(spec);
  CommandOutput out;
  const auto csv = entropy_sweep_csv(rows);
  out.content = format == OutputFormat::Csv ? csv
                                            : csv_to_json(csv, header_json(config, "sweep-entropy"));
  bool increasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    increasing = increasing && rows[i].cells[1].closed_form > rows[i - 1].cells[1].closed_form;
  }
  out.summary = fmt::format(
      "sweep-entropy: {} rows, S from {:.10g} to {:.10g}, strictly increasing: {}\n", rows.size(),
      rows.front().cells[1].closed_form, rows.back().cells[1].closed_form,
      increasing ? "yes" : "no");
  return out;
}

CommandOutput cmd_sweep(const Config& config) {
  const auto format = format_from(config);
  const auto spec = sweep_spec_from_config(config);
  const auto rows = run_sweep(spec);
  CommandOutput out;
  const auto csv = sweep_csv(spec, rows);
  out.content = format == OutputFormat::Csv ? csv : csv_to_json(csv, header_json(config, "sweep"));
  out.summary = fmt::format("sweep: {} rows over {} ({} values x {} temperatures)\n", rows.size(),
                            to_string(spec.parameter), spec.values.size(), spec.betas.size());
  for (std::size_t i = 0; i < spec.observables.size(); ++i) {
    double worst = -1.0;
    for (const auto& r : rows) {
      const auto& cell = r.cells[i];
      if (!cell.oracle) continue;
      const double scale = std::max(std::abs(cell.closed_form), kResidualFloor);
      worst = std::max(worst, std::abs(*cell.oracle - cell.closed_form) / scale);
    }
    if (worst >= 0.0) {
      out.summary += fmt::format("  {}: max |cf - oracle| / |cf| = {:.3e}\n",
                                 to_string(spec.observables[i]), worst);
    }
  }
  return out;
}

CommandOutput cmd_convergence(const Config& config) {
  const auto params = circuit_from(config);
  require_underdamped(params);
  const double beta = config.number("convergence.beta");
  if (!(beta > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("beta must be > 0 (got {})", beta));
  }
  const auto observable = parse_observable(config.string("convergence.observable"));
  auto ladder = ladder_from(config);
  ladder.tolerance = config.number("convergence.tolerance");
  const Observable tracked[] = {observable};
  const auto sol = solve_converged(params, beta, tracked, ladder);
  const auto& rep = sol.report;

  std::optional<double> reference;
  switch (observable) {
    case Observable::InternalEnergy: reference = internal_energy_cf(params, beta); break;
    case Observable::Entropy: reference = entropy_cf(params, beta); break;
    case Observable::Fluctuation: reference = fluctuation_cf(params, beta); break;
    case Observable::FreeEnergy: reference = -log_partition_cf(params, beta) / beta; break;
    case Observable::CrossAverage:
      reference = 2.0 * params.inductance * dH_dR_average_cf(params, beta);
      break;
    case Observable::ResistanceDerivativeAverage: reference = dH_dR_average_cf(params, beta); break;
    case Observable::ResistorEnergy: reference = resistor_energy_cf(params, beta); break;
  }

  Json doc = header_json(config, "convergence");
  doc["params"] = params_json(params);
  doc["beta"] = beta;
  doc["observable"] = to_string(observable);
  doc["tolerance"] = ladder.tolerance;
  doc["tail_tolerance"] = ladder.tail_tolerance;
  doc["value"] = sol.value(observable);
  doc["closed_form"] = optional_number(reference);
  doc["converged"] = rep.converged;
  doc["n_used"] = rep.n_used;
  doc["tail_mass"] = rep.tail_mass;
  doc["successive_change"] = optional_number(rep.successive_change);
  Json trace = Json::array();
  std::string lines;
  for (const auto& step : rep.trace) {
    trace.push_back(Json{{"N", step.dim},
                         {"value", step.value},
                         {"tail_mass", step.tail_mass},
                         {"change", optional_number(step.change)}});
    lines += fmt::format("  N={:<5} value={:.16e} tail_mass={:.3e} change={:.3e}\n", step.dim,
                         step.value, step.tail_mass, step.change);
  }
  doc["trace"] = std::move(trace);

  CommandOutput out;
  out.content = doc.dump(2) + "\n";
  out.summary = fmt::format("convergence of {} at {}, beta={}: {} at N={}\n", to_string(observable),
                            describe(params), beta, rep.converged ? "converged" : "NOT converged",
                            rep.n_used) +
                lines;
  return out;
}

CommandOutput run_command(std::string_view name, const Config& config) {
  CommandOutput out;
  try {
    if (name == "check") return cmd_check(config);
    if (name == "sweep-entropy") return cmd_sweep_entropy(config);
    if (name == "sweep") return cmd_sweep(config);
    if (name == "convergence") return cmd_convergence(config);
    out.exit_code = kExitUsage;
    out.summary = fmt::format("error: unknown command '{}'\n", name);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::EigensolverFailure:
      case ErrorCode::HermiticityViolation:
      case ErrorCode::DimensionMismatch:
        out.exit_code = kExitCheckFailure;
        break;
      default:
        out.exit_code = kExitUsage;
    }
    out.summary = fmt::format("error [{}]: {}\n", to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    out.exit_code = kExitCheckFailure;
    out.summary = fmt::format("error: {}\n", e.what());
  }
  out.content.clear();
  return out;
}

}  // namespace rlc
