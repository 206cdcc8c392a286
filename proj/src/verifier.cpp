#include "rlcthermo/verifier.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rlcthermo/closed_forms.hpp"
#include "rlcthermo/error.hpp"

namespace rlc {

namespace {

constexpr Observable kLadderObservables[] = {Observable::InternalEnergy, Observable::Entropy};

QuadraticForm moved_form(const CircuitParams& p, Parameter which, double value) {
  double L = p.inductance;
  double C = p.capacitance;
  double R = p.resistance;
  switch (which) {
    case Parameter::Inductance: L = value; break;
    case Parameter::Capacitance: C = value; break;
    case Parameter::Resistance: R = value; break;
  }
  if (!(L > 0.0) || !(C > 0.0)) {
    throw Error(ErrorCode::StencilDomain,
                fmt::format("stencil leaves L, C > 0 at {} = {:.17g}", to_string(which), value));
  }
  return QuadraticForm{1.0 / (2.0 * L), 1.0 / (2.0 * C), R / (2.0 * L)};
}

double parameter_step(const VerifierSettings& s, double x) {
  return s.parameter_step * std::max(1.0, std::abs(x));
}

double beta_step(const VerifierSettings& s, double beta) { return s.beta_step * beta; }

double average_at(std::span<const double> energies, std::span<const double> values, double beta) {
  return weighted_average(thermal_state(energies, beta), values);
}

DerivativeEstimate energy_derivative(FrozenOracle& o, Parameter which, const VerifierSettings& s) {
  const double x = parameter_value(o.params(), which);
  return finite_diff(
      [&](double v) {
        const auto& e = o.energies_at(which, v);
        return internal_energy(thermal_state(e, o.beta()), e);
      },
      x, parameter_step(s, x));
}

DerivativeEstimate entropy_derivative(FrozenOracle& o, Parameter which, const VerifierSettings& s) {
  const double x = parameter_value(o.params(), which);
  return finite_diff(
      [&](double v) {
        return von_neumann_entropy(thermal_state(o.energies_at(which, v), o.beta()),
                                   o.params().boltzmann);
      },
      x, parameter_step(s, x));
}

// d/dbeta of sum_n p_n(beta) values_n on the center spectrum.
DerivativeEstimate beta_derivative(FrozenOracle& o, std::span<const double> values,
                                   const VerifierSettings& s) {
  const auto& e = o.spectrum().energies;
  return finite_diff([&](double b) { return average_at(e, values, b); }, o.beta(),
                     beta_step(s, o.beta()));
}

CheckResult finish(CheckResult r, const FrozenOracle& o) {
  if (!o.converged()) {
    return mark_inconclusive(std::move(r), "oracle did not converge within the ladder cap");
  }
  return r;
}

}  // namespace

FrozenOracle::FrozenOracle(const CircuitParams& params, double beta, const LadderOptions& ladder)
    : params_(params), beta_(beta) {
  auto solution = solve_converged(params, beta, kLadderObservables, ladder);
  report_ = std::move(solution.report);
  basis_ = solution.basis;
  solve_center(build_hamiltonian(params_, basis_));
}

FrozenOracle::FrozenOracle(const CircuitParams& params, double beta, std::size_t fixed_dim)
    : params_(params), beta_(beta) {
  require_underdamped(params);
  basis_ = FockBasis::reference(params, fixed_dim);
  solve_center(build_hamiltonian(params_, basis_));
  report_.n_used = fixed_dim;
  report_.tail_mass = state_.probabilities.back();
  report_.converged = true;
}

void FrozenOracle::solve_center(const TruncatedOperator& h) {
  spectrum_ = diagonalize(h, Eigenvectors::Compute);
  state_ = thermal_state(spectrum_, beta_);
  stencil_.emplace(hamiltonian_form(params_), spectrum_.energies);
}

const std::vector<double>& FrozenOracle::energies(const QuadraticForm& form) {
  if (auto it = stencil_.find(form); it != stencil_.end()) return it->second;
  if (!form_positive_definite(form)) {
    throw Error(ErrorCode::StencilDomain,
                fmt::format("stencil form ({:.17g}, {:.17g}, {:.17g}) is not underdamped",
                            form.flux2, form.charge2, form.cross));
  }
  auto spectrum = diagonalize(assemble(form, basis_), Eigenvectors::Skip);
  return stencil_.emplace(form, std::move(spectrum.energies)).first->second;
}

const std::vector<double>& FrozenOracle::energies_at(Parameter which, double value) {
  return energies(moved_form(params_, which, value));
}

std::vector<double> FrozenOracle::form_diagonal(const QuadraticForm& form) const {
  const auto diag = diagonal_elements(spectrum_, assemble(form, basis_));
  std::vector<double> out;
  out.reserve(diag.size());
  for (const auto& z : diag) out.push_back(z.real());
  return out;
}

const std::vector<double>& FrozenOracle::derivative_diagonal(Parameter which) {
  if (auto it = derivative_diag_.find(which); it != derivative_diag_.end()) return it->second;
  return derivative_diag_.emplace(which, form_diagonal(derivative_form(params_, which)))
      .first->second;
}

CheckContext FrozenOracle::context(std::optional<Parameter> which) const {
  CheckContext ctx;
  ctx.params = params_;
  ctx.beta = beta_;
  ctx.parameter = which;
  ctx.n_used = basis_.dim;
  ctx.converged = report_.converged;
  return ctx;
}

CheckResult check_level_derivative(const CircuitParams& params, std::size_t dim, std::size_t level,
                                   Parameter which, const VerifierSettings& settings) {
  if (level >= dim / 4) {
    throw Error(ErrorCode::Precondition,
                fmt::format("level {} is not below dim/4 = {}", level, dim / 4));
  }
  FrozenOracle oracle(params, 1.0, dim);
  const double x = parameter_value(params, which);
  const double h = parameter_step(settings, x);
  const auto slope = finite_diff(
      [&](double v) { return oracle.energies_at(which, v)[level]; }, x, h);
  const double element = oracle.derivative_diagonal(which)[level];

  auto ctx = oracle.context(which);
  ctx.note = fmt::format("level {}", level);
  auto result = make_check("hellmann_feynman_level", slope.value, element,
                           settings.level_tolerance, ctx);

  const auto& e = oracle.spectrum().energies;
  double gap = e[level + 1] - e[level];
  if (level > 0) gap = std::min(gap, e[level] - e[level - 1]);
  const auto& d = assemble(derivative_form(params, which), oracle.basis()).matrix();
  const double bound = d.cwiseAbs().rowwise().sum().maxCoeff();
  if (gap < 10.0 * h * bound) {
    return mark_inconclusive(std::move(result), "level spacing too small to track the level");
  }
  return result;
}

CheckResult check_ensemble_derivative(FrozenOracle& o, Parameter which,
                                      const VerifierSettings& s) {
  const auto slope = energy_derivative(o, which, s);
  const auto& e = o.spectrum().energies;
  const auto& p = o.state().probabilities;
  const auto& d = o.derivative_diagonal(which);
  const double b = o.beta();
  const double u = internal_energy(o.state(), e);
  double rhs = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) rhs += p[n] * (1.0 + b * u - b * e[n]) * d[n];
  return finish(make_check("ghft_ensemble_derivative", slope.value, rhs, s.ghft_tolerance,
                           o.context(which)),
                o);
}

CheckResult check_energy_weighted_average(FrozenOracle& o, Parameter which,
                                          const VerifierSettings& s) {
  const auto& e = o.spectrum().energies;
  const auto& p = o.state().probabilities;
  const auto& d = o.derivative_diagonal(which);
  double lhs = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) lhs += p[n] * e[n] * d[n];
  const auto slope = beta_derivative(o, d, s);
  const double rhs = -slope.value + weighted_average(o.state(), d) * internal_energy(o.state(), e);
  return finish(make_check("ghft_energy_weighted_average", lhs, rhs, s.ghft_tolerance,
                           o.context(which)),
                o);
}

CheckResult check_beta_derivative_form(FrozenOracle& o, Parameter which,
                                       const VerifierSettings& s) {
  const auto slope = energy_derivative(o, which, s);
  const auto& d = o.derivative_diagonal(which);
  const auto beta_slope = beta_derivative(o, d, s);
  const double rhs = weighted_average(o.state(), d) + o.beta() * beta_slope.value;
  return finish(make_check("ghft_beta_derivative_form", slope.value, rhs, s.ghft_tolerance,
                           o.context(which)),
                o);
}

CheckResult check_fluctuation(FrozenOracle& o, const VerifierSettings& s) {
  const auto& e = o.spectrum().energies;
  const auto slope = beta_derivative(o, e, s);
  return finish(make_check("fluctuation_beta_derivative", fluctuation(o.state(), e), -slope.value,
                           s.ghft_tolerance, o.context()),
                o);
}

CheckResult check_entropy_variation(FrozenOracle& o, Parameter which, EntropyForm form,
                                    const VerifierSettings& s) {
  const double k = o.params().boltzmann;
  const double b = o.beta();
  const auto ds = entropy_derivative(o, which, s);
  const auto& d = o.derivative_diagonal(which);
  if (form == EntropyForm::Difference) {
    const auto du = energy_derivative(o, which, s);
    const double rhs = k * b * (du.value - weighted_average(o.state(), d));
    return finish(make_check("entropy_variation_difference", ds.value, rhs, s.ghft_tolerance,
                             o.context(which)),
                  o);
  }
  const double t = 1.0 / (k * b);
  const auto beta_slope = beta_derivative(o, d, s);
  return finish(make_check("entropy_variation_beta", t * ds.value, b * beta_slope.value,
                           s.ghft_tolerance, o.context(which)),
                o);
}

CheckResult check_pde_residual(FrozenOracle& o, const VerifierSettings& s) {
  const auto& p = o.params();
  const double L = p.inductance;
  const double C = p.capacitance;
  const double R = p.resistance;
  const double dl = energy_derivative(o, Parameter::Inductance, s).value;
  const double dc = energy_derivative(o, Parameter::Capacitance, s).value;
  const double dr = energy_derivative(o, Parameter::Resistance, s).value;
  const double t1 = 2.0 * R * L * L * dl;
  const double t2 = 2.0 * R * C * C * dc;
  const double t3 = (2.0 * L * R * R - L * L / C - L) * dr;
  const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
  return finish(make_check("characteristic_pde", t1 + t2, -t3, s.pde_tolerance, o.context(),
                           ToleranceMode::Relative, scale),
                o);
}

CheckResult check_commutator_average(FrozenOracle& o, const VerifierSettings& s) {
  const auto& p = o.params();
  const double L = p.inductance;
  const double C = p.capacitance;
  const double R = p.resistance;
  const double b = o.beta();
  const auto& e = o.spectrum().energies;
  const auto& prob = o.state().probabilities;
  const auto cross = o.form_diagonal(QuadraticForm{0.0, 0.0, 1.0});
  const auto square = o.form_diagonal(QuadraticForm{1.0, 1.0, 0.0});
  const double u = internal_energy(o.state(), e);
  const double a1 = 1.0 / L + 1.0 / C;
  const double a2 = 2.0 * R / L;
  double sum = 0.0;
  double magnitude = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) {
    const double w = 1.0 + b * u - b * e[n];
    sum += prob[n] * w * (a1 * cross[n] + a2 * square[n]);
    magnitude += prob[n] * std::abs(w) * square[n];
  }
  magnitude *= a1 + a2;
  return finish(make_check("commutator_average", sum, 0.0, s.commutator_tolerance * magnitude,
                           o.context(), ToleranceMode::Absolute, magnitude),
                o);
}

CheckResult check_characteristic_invariance(const CircuitParams& a, const CircuitParams& b,
                                            double beta, const VerifierSettings& s) {
  const double c2a = characteristic_invariants(a).c2;
  const double c2b = characteristic_invariants(b).c2;
  if (std::abs(c2a - c2b) >= 1e-12) {
    throw Error(ErrorCode::Precondition,
                fmt::format("circuits do not share c2 ({:.17g} vs {:.17g})", c2a, c2b));
  }
  constexpr Observable tracked[] = {Observable::InternalEnergy};
  const auto sa = solve_converged(a, beta, tracked, s.ladder);
  const auto sb = solve_converged(b, beta, tracked, s.ladder);
  CheckContext ctx;
  ctx.params = a;
  ctx.beta = beta;
  ctx.n_used = std::max(sa.report.n_used, sb.report.n_used);
  ctx.converged = sa.report.converged && sb.report.converged;
  ctx.note = fmt::format("partner {}", describe(b));
  auto r = make_check("characteristic_invariance", sa.value(Observable::InternalEnergy),
                      sb.value(Observable::InternalEnergy), s.characteristic_tolerance, ctx);
  if (!ctx.converged) return mark_inconclusive(std::move(r), "oracle did not converge");
  return r;
}

CheckResult check_canonical_commutator(const CircuitParams& params, std::size_t dim,
                                       double tolerance) {
  require_underdamped(params);
  const auto x = build_quadratures(params, dim);
  const auto c = commutator(x.charge, x.flux);
  const ComplexMatrix expected =
      Complex(0.0, params.hbar) * ComplexMatrix::Identity(c.dim(), c.dim());
  CheckContext ctx;
  ctx.params = params;
  ctx.n_used = dim;
  ctx.note = fmt::format("leading block {}", dim - 1);
  return make_check("canonical_commutator", max_block_deviation(c.matrix(), expected, dim - 1), 0.0,
                    tolerance, ctx, ToleranceMode::Absolute);
}

CheckResult check_commutator_identity(const CircuitParams& params, std::size_t dim,
                                      double tolerance) {
  require_underdamped(params);
  const auto basis = FockBasis::reference(params, dim);
  const auto x = build_quadratures(basis);
  const auto h = build_hamiltonian(params, basis);
  const auto q2 = x.charge * x.charge;
  const auto p2 = x.flux * x.flux;
  const auto cross = x.flux * x.charge + x.charge * x.flux;
  const auto lhs = commutator(q2 - p2, h);
  const double a1 = 1.0 / params.inductance + 1.0 / params.capacitance;
  const double a2 = 2.0 * params.resistance / params.inductance;
  const auto rhs = (cross.scaled(a1) + (p2 + q2).scaled(a2)).scaled(Complex(0.0, params.hbar));
  CheckContext ctx;
  ctx.params = params;
  ctx.n_used = dim;
  ctx.note = fmt::format("leading block {}", dim / 2);
  return make_check("commutator_identity", max_block_deviation(lhs.matrix(), rhs.matrix(), dim / 2),
                    0.0, tolerance, ctx, ToleranceMode::Absolute);
}

CheckResult check_level_spacing(const CircuitParams& params, std::size_t dim, std::size_t levels,
                                double tolerance) {
  if (levels + 1 > dim) {
    throw Error(ErrorCode::Precondition,
                fmt::format("{} spacings need more than {} levels", levels, dim));
  }
  const double quantum = params.hbar * omega(params).omega;
  const auto spectrum = diagonalize(build_hamiltonian(params, dim), Eigenvectors::Skip);
  const auto& e = spectrum.energies;
  std::size_t worst = 0;
  double worst_dev = -1.0;
  for (std::size_t n = 0; n < levels; ++n) {
    const double dev = std::abs((e[n + 1] - e[n]) - quantum);
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = n;
    }
  }
  CheckContext ctx;
  ctx.params = params;
  ctx.n_used = dim;
  ctx.note = fmt::format("worst spacing at n = {} of n < {}", worst, levels);
  return make_check("level_spacing", e[worst + 1] - e[worst], quantum, tolerance, ctx,
                    ToleranceMode::Relative, quantum);
}

CheckResult check_ensemble_derivative(const CircuitParams& params, double beta, Parameter which,
                                      const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_ensemble_derivative(o, which, settings);
}

CheckResult check_energy_weighted_average(const CircuitParams& params, double beta,
                                          Parameter which, const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_energy_weighted_average(o, which, settings);
}

CheckResult check_beta_derivative_form(const CircuitParams& params, double beta, Parameter which,
                                       const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_beta_derivative_form(o, which, settings);
}

CheckResult check_fluctuation(const CircuitParams& params, double beta,
                              const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_fluctuation(o, settings);
}

CheckResult check_entropy_variation(const CircuitParams& params, double beta, Parameter which,
                                    EntropyForm form, const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_entropy_variation(o, which, form, settings);
}

CheckResult check_pde_residual(const CircuitParams& params, double beta,
                               const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_pde_residual(o, settings);
}

CheckResult check_commutator_average(const CircuitParams& params, double beta,
                                     const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return check_commutator_average(o, settings);
}

LinearCoefficientProbe probe_linear_coefficients(const CircuitParams& params, double beta,
                                                 const VerifierSettings& settings) {
  FrozenOracle o(params, beta, settings.ladder);
  return probe_linear_coefficients(o, settings);
}

LinearCoefficientProbe probe_linear_coefficients(FrozenOracle& o, const VerifierSettings& s) {
  LinearCoefficientProbe probe;
  probe.params = o.params();
  probe.beta = o.beta();
  probe.coefficients = hamiltonian_form(o.params());
  probe.n_used = o.basis().dim;
  probe.converged = o.converged();
  const double k = o.params().boltzmann;
  auto along = [&](double QuadraticForm::*member) {
    const double x = probe.coefficients.*member;
    return finite_diff(
        [&](double v) {
          QuadraticForm f = probe.coefficients;
          f.*member = v;
          return von_neumann_entropy(thermal_state(o.energies(f), o.beta()), k);
        },
        x, parameter_step(s, x));
  };
  probe.dS_dflux2 = along(&QuadraticForm::flux2);
  probe.dS_dcharge2 = along(&QuadraticForm::charge2);
  probe.dS_dcross = along(&QuadraticForm::cross);
  probe.dS_dR_closed_form = dS_dR_cf(o.params(), o.beta());
  probe.dS_dcross_chain_rule = 2.0 * o.params().inductance * probe.dS_dR_closed_form;
  return probe;
}

}  // namespace rlc
