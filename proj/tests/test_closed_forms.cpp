// Reference values from tests/oracles/reference_values.py (mpmath, 50 digits).
#include <doctest.h>

#include <cmath>

#include "rlcthermo/closed_forms.hpp"
#include "rlcthermo/error.hpp"

using namespace rlc;

namespace {

constexpr double kTight = 1e-14;

struct Reference {
  CircuitParams params;
  double beta, omega, energy, entropy, fluctuation, dH_dR, resistor, dS_dR, log_z;
};

const Reference kReferences[] = {
    {{1, 1, 0.5, 1, 1}, 1.0, 0.86602540378443865, 1.0617324441754742, 1.1745164999622568,
     0.9397757830148264, -0.70782162945031612, -0.35391081472515806, 0.62651718867655094,
     0.1127840557867826},
    {{1, 1, 0, 1, 1}, 1.0, 1.0, 1.0819767068693264, 1.0406518522564083, 0.92067359420779232,
     0.0, 0.0, 0.0, -0.041324854612918109},
    {{2, 0.5, 0.3, 1, 1}, 0.7, 0.98868599666425943, 1.4851421990185871, 1.3877747436040425,
     1.9612723513057645, -0.11394952933646448, -0.034184858800939342, 0.073735814742186018,
     0.34817520429103159},
    {{0.5, 2, 0.1, 1, 1}, 3.0, 0.97979589711327124, 0.54462210278209875, 0.21852106058986932,
     0.056613234838794935, -0.22692587615920783, -0.022692587615920784, 0.21229963064548102,
     -1.4153452477564269},
};

}  // namespace

TEST_CASE("closed forms match high-precision references") {
  for (const auto& r : kReferences) {
    CAPTURE(describe(r.params));
    CHECK(omega(r.params).omega == doctest::Approx(r.omega).epsilon(kTight));
    CHECK(internal_energy_cf(r.params, r.beta) == doctest::Approx(r.energy).epsilon(kTight));
    CHECK(entropy_cf(r.params, r.beta) == doctest::Approx(r.entropy).epsilon(kTight));
    CHECK(fluctuation_cf(r.params, r.beta) == doctest::Approx(r.fluctuation).epsilon(kTight));
    CHECK(dH_dR_average_cf(r.params, r.beta) == doctest::Approx(r.dH_dR).epsilon(kTight));
    CHECK(resistor_energy_cf(r.params, r.beta) == doctest::Approx(r.resistor).epsilon(kTight));
    CHECK(dS_dR_cf(r.params, r.beta) == doctest::Approx(r.dS_dR).epsilon(kTight));
    CHECK(log_partition_cf(r.params, r.beta) == doctest::Approx(r.log_z).epsilon(kTight));
  }
}

TEST_CASE("entropy at omega = 1, beta = 1 is e/(e-1) - ln(e-1)") {
  const double e = std::exp(1.0);
  CHECK(entropy_cf(CircuitParams{}, 1.0) ==
        doctest::Approx(e / (e - 1) - std::log(e - 1)).epsilon(kTight));
}

TEST_CASE("R = 0 reduces to the Bose oscillator") {
  CHECK(internal_energy_cf(CircuitParams{}, 1.0) ==
        doctest::Approx(0.5 / std::tanh(0.5)).epsilon(kTight));
  CHECK(resistor_energy_cf(CircuitParams{}, 2.0) == 0.0);
  CHECK(dS_dR_cf(CircuitParams{}, 2.0) == 0.0);
}

TEST_CASE("oscillator functions across the series and asymptotic seams") {
  // x = 1e-8 (series), 1e-3 (direct), 50 (direct), 800 (asymptotic)
  CHECK(oscillator::coth_half(1e-8) == doctest::Approx(2e8).epsilon(kTight));
  CHECK(oscillator::coth_half(1e-3) == doctest::Approx(2000.0001666666639).epsilon(kTight));
  CHECK(oscillator::coth_half(800) == 1.0);
  CHECK(oscillator::inverse_sinh2_half(1e-8) == doctest::Approx(4e16).epsilon(kTight));
  CHECK(oscillator::inverse_sinh2_half(1e-3) == doctest::Approx(3999999.6666666833).epsilon(kTight));
  CHECK(oscillator::inverse_sinh2_half(50) ==
        doctest::Approx(7.7149993918556711e-22).epsilon(kTight));
  CHECK(oscillator::entropy(1e-8) == doctest::Approx(19.420680743952365).epsilon(kTight));
  CHECK(oscillator::entropy(1e-3) == doctest::Approx(7.9077553206488027).epsilon(kTight));
  CHECK(oscillator::entropy(50) == doctest::Approx(9.8366242246159807e-21).epsilon(1e-13));
  CHECK(oscillator::entropy(800) == 0.0);
  CHECK(oscillator::log_partition(1e-8) == doctest::Approx(18.420680743952365).epsilon(kTight));
  CHECK(oscillator::log_partition(1e-3) == doctest::Approx(6.9077552373154707).epsilon(kTight));
  CHECK(oscillator::log_partition(50) == doctest::Approx(-25.0).epsilon(kTight));
  CHECK(oscillator::log_partition(800) == doctest::Approx(-400.0).epsilon(kTight));
}

TEST_CASE("functions are continuous across the small-argument switch") {
  const double below = kSmallArgument * (1 - 1e-9);
  const double above = kSmallArgument * (1 + 1e-9);
  CHECK(oscillator::coth_half(below) == doctest::Approx(oscillator::coth_half(above)).epsilon(1e-8));
  CHECK(oscillator::inverse_sinh2_half(below) ==
        doctest::Approx(oscillator::inverse_sinh2_half(above)).epsilon(1e-8));
  CHECK(oscillator::entropy(below) == doctest::Approx(oscillator::entropy(above)).epsilon(1e-8));
  CHECK(oscillator::log_partition(below) ==
        doctest::Approx(oscillator::log_partition(above)).epsilon(1e-8));
}

TEST_CASE("overdamped circuits are refused") {
  const CircuitParams critical{1, 1, 1, 1, 1};
  CHECK_THROWS_AS(omega(critical), Error);
  CHECK_THROWS_AS(internal_energy_cf(CircuitParams{1, 1, 1.5, 1, 1}, 1.0), Error);
  try {
    entropy_cf(critical, 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverdampedDomain);
  }
}

TEST_CASE("characteristic invariants") {
  const auto c = characteristic_invariants(CircuitParams{2, 0.5, 0.3, 1, 1});
  CHECK(c.c1 == doctest::Approx(0.5 - 2.0).epsilon(kTight));
  CHECK(c.c2 == doctest::Approx(0.09 / 4 - 1.0).epsilon(kTight));
  // f(x, y) depends on y = c2 only and reproduces the internal energy.
  const CircuitParams p{1, 1, 0.5, 1, 1};
  const auto inv = characteristic_invariants(p);
  CHECK(f_of_xy(inv.c1, inv.c2, 1.0, 1.0) ==
        doctest::Approx(internal_energy_cf(p, 1.0)).epsilon(kTight));
  CHECK(f_of_xy(123.0, inv.c2, 1.0, 1.0) == f_of_xy(-7.0, inv.c2, 1.0, 1.0));
  CHECK_THROWS_AS(f_of_xy(0.0, 0.0, 1.0, 1.0), Error);
}

TEST_CASE("properties over a sampled grid") {
  for (double L : {0.5, 1.0, 2.0}) {
    for (double C : {0.5, 2.0}) {
      const double rc = std::sqrt(L / C);
      double previous_entropy = -1.0;
      for (double rho = 0.0; rho < 0.999; rho += 0.05) {
        const CircuitParams p{L, C, rho * rc, 1, 1};
        // Entropy grows with R at fixed beta.
        const double s = entropy_cf(p, 1.3);
        CHECK(s > previous_entropy);
        previous_entropy = s;
        // The resistor term never adds energy.
        CHECK(resistor_energy_cf(p, 1.3) <= 0.0);
        // U and S grow as beta falls.
        CHECK(internal_energy_cf(p, 0.5) > internal_energy_cf(p, 1.0));
        CHECK(entropy_cf(p, 0.5) > entropy_cf(p, 1.0));
        // Zero-point floor.
        CHECK(internal_energy_cf(p, 1e4) >= 0.5 * omega(p).omega * (1 - 1e-15));
        // F = U - TS with F = -ln Z / beta.
        const double beta = 0.8;
        const double f = -log_partition_cf(p, beta) / beta;
        CHECK(f == doctest::Approx(internal_energy_cf(p, beta) - entropy_cf(p, beta) / beta)
                       .epsilon(1e-13));
      }
    }
  }
}
