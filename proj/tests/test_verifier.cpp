// Derivative references from tests/oracles/reference_values.py.
#include <doctest.h>

#include <cmath>

#include "rlcthermo/closed_forms.hpp"
#include "rlcthermo/error.hpp"
#include "rlcthermo/verifier.hpp"

using namespace rlc;

namespace {

const CircuitParams kCircuit{1, 1, 0.5, 1, 1};
constexpr Parameter kAll[] = {Parameter::Inductance, Parameter::Capacitance,
                              Parameter::Resistance};

}  // namespace

TEST_CASE("finite differences: polynomial exactness, error estimate, domain") {
  const auto d = finite_diff([](double x) { return x * x * x; }, 2.0, 1e-3);
  CHECK(d.value == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(d.error_estimate < 1e-5);
  CHECK(d.step == 1e-3);
  CHECK_THROWS_AS(finite_diff([](double x) { return x; }, 0.0, 0.0), Error);
  try {
    finite_diff([](double x) { return std::sqrt(x); }, 0.0, 1e-3);
    FAIL("expected stencil domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StencilDomain);
  }
}

TEST_CASE("frozen oracle exposes the center solution") {
  FrozenOracle o(kCircuit, 1.0, VerifierSettings{}.ladder);
  CHECK(o.converged());
  CHECK(o.basis().dim == o.report().n_used);
  CHECK(o.spectrum().has_vectors());
  // <dH/dR> = <pq + qp> / 2L
  const auto& d = o.derivative_diagonal(Parameter::Resistance);
  CHECK(weighted_average(o.state(), d) == doctest::Approx(-0.70782162945031612).epsilon(1e-9));
  // R may cross zero inside a stencil; the form is even in R.
  const auto& plus = o.energies_at(Parameter::Resistance, 0.2);
  const auto& minus = o.energies_at(Parameter::Resistance, -0.2);
  for (std::size_t n = 0; n < 10; ++n) CHECK(plus[n] == doctest::Approx(minus[n]).epsilon(1e-12));
  CHECK_THROWS_AS(o.energies_at(Parameter::Inductance, -1.0), Error);
  CHECK_THROWS_AS(o.energies_at(Parameter::Resistance, 1.5), Error);
}

TEST_CASE("level derivatives match diagonal elements") {
  for (auto which : kAll) {
    for (std::size_t level : {0u, 1u, 3u, 10u}) {
      const auto r = check_level_derivative(kCircuit, 64, level, which);
      CAPTURE(r.name);
      CAPTURE(level);
      CHECK(r.pass);
      CHECK(r.rel_residual < 1e-6);
    }
  }
  CHECK_THROWS_AS(check_level_derivative(kCircuit, 64, 16, Parameter::Resistance), Error);
}

TEST_CASE("ensemble derivative identities at the reference point") {
  const double dU[] = {-0.040652220386882593, -0.081304440773765187, -0.081304440773765187};
  const double HdH[] = {-0.68901718867655094, -1.3780343773531019, -1.3780343773531019};
  const double dS[] = {0.31325859433827547, 0.62651718867655094, 0.62651718867655094};
  FrozenOracle o(kCircuit, 1.0, VerifierSettings{}.ladder);
  for (int i = 0; i < 3; ++i) {
    const auto which = kAll[i];
    CAPTURE(to_string(which));
    const auto a = check_ensemble_derivative(o, which);
    CHECK(a.pass);
    CHECK(a.lhs == doctest::Approx(dU[i]).epsilon(1e-8));
    const auto b = check_energy_weighted_average(o, which);
    CHECK(b.pass);
    CHECK(b.lhs == doctest::Approx(HdH[i]).epsilon(1e-9));
    const auto c = check_beta_derivative_form(o, which);
    CHECK(c.pass);
    const auto d = check_entropy_variation(o, which, EntropyForm::Difference);
    CHECK(d.pass);
    CHECK(d.lhs == doctest::Approx(dS[i]).epsilon(1e-8));
    const auto e = check_entropy_variation(o, which, EntropyForm::BetaDerivative);
    CHECK(e.pass);
  }
}

TEST_CASE("fluctuation, PDE and commutator-average checks") {
  const auto f = check_fluctuation(kCircuit, 1.0);
  CHECK(f.pass);
  CHECK(f.lhs == doctest::Approx(0.9397757830148264).epsilon(1e-10));
  const auto p = check_pde_residual(kCircuit, 1.0);
  CHECK(p.pass);
  CHECK(p.rel_residual < 1e-6);
  const auto c = check_commutator_average(CircuitParams{1.3, 0.6, 0.5, 1, 1}, 0.7);
  CHECK(c.pass);
}

TEST_CASE("checks at R = 0 fall back to the near-zero rule") {
  const CircuitParams p{1, 1, 0, 1, 1};
  const auto a = check_ensemble_derivative(p, 1.0, Parameter::Resistance);
  CHECK(a.pass);
  CHECK(std::abs(a.rhs) < 1e-12);
  CHECK(check_entropy_variation(p, 1.0, Parameter::Resistance, EntropyForm::BetaDerivative).pass);
}

TEST_CASE("operator identities") {
  CHECK(check_canonical_commutator(kCircuit, 16, 1e-12).pass);
  const auto id = check_commutator_identity(CircuitParams{1, 2, 0.3, 1, 1}, 64);
  CHECK(id.pass);
  CHECK(id.lhs < 1e-10);
  CircuitParams scaled = kCircuit;
  scaled.hbar = 0.25;
  CHECK(check_commutator_identity(scaled, 64).pass);
}

TEST_CASE("level spacing equals hbar omega for moderate damping") {
  const auto r = check_level_spacing(kCircuit, 256, 64);
  CHECK(r.pass);
  CHECK(r.rhs == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
  const auto strong = check_level_spacing(CircuitParams{1, 1, 0.6, 1, 1}, 256, 64);
  CHECK(strong.pass);
}

TEST_CASE("characteristic invariance between circuits with equal c2") {
  const CircuitParams b{2, 0.5, 1.0, 1, 1};
  const auto r = check_characteristic_invariance(kCircuit, b, 1.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(1.0617324441754742).epsilon(1e-8));
  CHECK_THROWS_AS(check_characteristic_invariance(kCircuit, CircuitParams{2, 0.5, 0.5, 1, 1}, 1.0),
                  Error);
}

TEST_CASE("a capped ladder makes checks inconclusive, never passing") {
  VerifierSettings s;
  s.ladder.max_dim = 32;
  const CircuitParams hot{1, 1, 0.9, 1, 1};
  const auto r = check_ensemble_derivative(hot, 0.05, Parameter::Inductance, s);
  CHECK(r.context.inconclusive);
  CHECK_FALSE(r.context.converged);
  CHECK_FALSE(r.pass);
}

TEST_CASE("check results: relative, near-zero and absolute modes") {
  CheckContext ctx;
  CHECK(make_check("x", 1.0, 1.0 + 1e-7, 1e-6, ctx).pass);
  CHECK_FALSE(make_check("x", 1.0, 1.0 + 1e-5, 1e-6, ctx).pass);
  CHECK(make_check("x", 1e-12, -1e-12, 1e-6, ctx).pass);
  CHECK_FALSE(make_check("x", 1e-12, 0.0, 0.0, ctx).pass);
  CHECK(make_check("x", 3.0, 3.5, 1.0, ctx, ToleranceMode::Absolute).pass);
  CHECK_FALSE(make_check("x", NAN, 1.0, 1.0, ctx).pass);
  const auto marked = mark_inconclusive(make_check("x", 1.0, 1.0, 1.0, ctx), "why");
  CHECK_FALSE(marked.pass);
  CHECK(marked.context.note == "why");
}

TEST_CASE("linear coefficient probe is reported with the chain-rule comparison") {
  const auto probe = probe_linear_coefficients(kCircuit, 1.0);
  CHECK(probe.converged);
  CHECK(probe.coefficients.cross == doctest::Approx(0.25));
  // dS/dchi3 is not zero; it equals 2L dS/dR.
  CHECK(probe.dS_dcross.value == doctest::Approx(1.2530343773531019).epsilon(1e-8));
  CHECK(probe.dS_dcross_chain_rule == doctest::Approx(1.2530343773531019).epsilon(1e-14));
  CHECK(probe.dS_dflux2.value == doctest::Approx(-1.2530343773).epsilon(1e-8));
  CHECK(probe.dS_dcharge2.value == doctest::Approx(-1.2530343773).epsilon(1e-8));
}
