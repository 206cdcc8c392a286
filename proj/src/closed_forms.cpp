#include "rlcthermo/closed_forms.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rlcthermo/error.hpp"

namespace rlc {

namespace oscillator {

double coth_half(double x) {
  if (x < kSmallArgument) return 2.0 / x + x / 6.0;
  if (x > kLargeArgument) return 1.0;
  // coth(x/2) = (1 + e^-x) / (1 - e^-x)
  return -(1.0 + std::exp(-x)) / std::expm1(-x);
}

double inverse_sinh2_half(double x) {
  if (x < kSmallArgument) return 4.0 / (x * x) - 1.0 / 3.0;
  if (x > kLargeArgument) return 4.0 * std::exp(-x);
  const double d = std::expm1(-x);
  return 4.0 * std::exp(-x) / (d * d);
}

double entropy(double x) {
  if (x < kSmallArgument) return 1.0 - std::log(x) + x * x / 24.0;
  if (x > kLargeArgument) return (x + 1.0) * std::exp(-x);
  // x/(e^x - 1) - ln(1 - e^-x)
  return x / std::expm1(x) - std::log(-std::expm1(-x));
}

double log_partition(double x) {
  if (x < kSmallArgument) return -std::log(x) - x * x / 24.0;
  return -0.5 * x - std::log(-std::expm1(-x));
}

}  // namespace oscillator

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("beta must be > 0 (got {})", beta));
  }
}

struct Point {
  double omega;
  double x;  // beta hbar omega
};

Point evaluate(const CircuitParams& p, double beta) {
  require_beta(beta);
  const double w = omega(p).omega;
  return {w, beta * p.hbar * w};
}

}  // namespace

ModeFrequency omega(const CircuitParams& params) {
  require_underdamped(params);
  const double L = params.inductance;
  const double C = params.capacitance;
  return ModeFrequency{1.0 / std::sqrt(L * C), std::sqrt(omega_squared(params))};
}

double internal_energy_cf(const CircuitParams& p, double beta) {
  const auto [w, x] = evaluate(p, beta);
  if (x < kSmallArgument) {
    // 1/beta + beta hbar^2 omega^2 / 12
    return 1.0 / beta + beta * p.hbar * p.hbar * w * w / 12.0;
  }
  return 0.5 * p.hbar * w * oscillator::coth_half(x);
}

double fluctuation_cf(const CircuitParams& p, double beta) {
  const auto [w, x] = evaluate(p, beta);
  const double half = 0.5 * p.hbar * w;
  if (x < kSmallArgument) {
    return 1.0 / (beta * beta) - p.hbar * p.hbar * w * w / 12.0;
  }
  return half * half * oscillator::inverse_sinh2_half(x);
}

double dH_dR_average_cf(const CircuitParams& p, double beta) {
  const auto [w, x] = evaluate(p, beta);
  const double L = p.inductance;
  return -p.hbar * p.resistance / (2.0 * w * L * L) * oscillator::coth_half(x);
}

double resistor_energy_cf(const CircuitParams& p, double beta) {
  return p.resistance * dH_dR_average_cf(p, beta);
}

double dS_dR_cf(const CircuitParams& p, double beta) {
  const auto [w, x] = evaluate(p, beta);
  const double L = p.inductance;
  // beta R hbar^2 / (4 T L^2) with 1/T = k beta
  const double prefactor = p.boltzmann * beta * beta * p.resistance * p.hbar * p.hbar / (4.0 * L * L);
  return prefactor * oscillator::inverse_sinh2_half(x);
}

double entropy_cf(const CircuitParams& p, double beta) {
  const auto [w, x] = evaluate(p, beta);
  return p.boltzmann * oscillator::entropy(x);
}

double log_partition_cf(const CircuitParams& p, double beta) {
  const auto [w, x] = evaluate(p, beta);
  return oscillator::log_partition(x);
}

CharacteristicInvariants characteristic_invariants(const CircuitParams& p) {
  validate(p);
  const double L = p.inductance;
  const double C = p.capacitance;
  return CharacteristicInvariants{1.0 / L - 1.0 / C,
                                  p.resistance * p.resistance / (L * L) - 1.0 / (L * C)};
}

double f_of_xy(double /*x*/, double y, double beta, double hbar) {
  require_beta(beta);
  if (!(y < 0.0)) {
    throw Error(ErrorCode::OverdampedDomain,
                fmt::format("characteristic value y = {} must be negative", y));
  }
  const double w = std::sqrt(-y);
  const double x = hbar * beta * w;
  if (x < kSmallArgument) return 1.0 / beta + beta * hbar * hbar * w * w / 12.0;
  return 0.5 * hbar * w * oscillator::coth_half(x);
}

}  // namespace rlc
