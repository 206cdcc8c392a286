#pragma once

#include "rlcthermo/params.hpp"

namespace rlc {

/// Below this value of beta*hbar*omega the hyperbolic expressions switch to
/// their series; above kLargeArgument they switch to asymptotic forms.
inline constexpr double kSmallArgument = 1e-6;
inline constexpr double kLargeArgument = 700.0;

struct ModeFrequency {
  double omega0 = 0.0;  // 1/sqrt(LC)
  double omega = 0.0;   // sqrt(1/(LC) - R^2/L^2)
};

/// c1 = 1/L - 1/C, c2 = R^2/L^2 - 1/(LC). Every thermal observable is a
/// function of c2 = -omega^2 alone.
struct CharacteristicInvariants {
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Throws OverdampedDomain when R >= sqrt(L/C).
ModeFrequency omega(const CircuitParams& params);

/// (hbar omega / 2) coth(beta hbar omega / 2)
double internal_energy_cf(const CircuitParams& params, double beta);
/// (hbar omega / 2)^2 / sinh^2(beta hbar omega / 2)
double fluctuation_cf(const CircuitParams& params, double beta);
/// <dH/dR> = -hbar R / (2 omega L^2) coth(beta hbar omega / 2)
double dH_dR_average_cf(const CircuitParams& params, double beta);
/// R <dH/dR> = (R / 2L) <pq + qp>; never positive.
double resistor_energy_cf(const CircuitParams& params, double beta);
/// dS/dR = k beta^2 hbar^2 R / (4 L^2) / sinh^2(beta hbar omega / 2)
double dS_dR_cf(const CircuitParams& params, double beta);
/// S = k [x e^x / (e^x - 1) - ln(e^x - 1)], x = beta hbar omega
double entropy_cf(const CircuitParams& params, double beta);
/// ln Z = -x/2 - ln(1 - e^-x) for a single oscillator
double log_partition_cf(const CircuitParams& params, double beta);

CharacteristicInvariants characteristic_invariants(const CircuitParams& params);

/// f(x, y) = (hbar sqrt(-y) / 2) coth(hbar beta sqrt(-y) / 2). The first
/// argument is accepted and ignored. Throws OverdampedDomain for y >= 0.
double f_of_xy(double x, double y, double beta, double hbar);

/// The same functions of the dimensionless x = beta hbar omega, scaled so
/// that the circuit forms above are thin wrappers. Exposed for seam tests.
namespace oscillator {
double coth_half(double x);              // coth(x/2)
double inverse_sinh2_half(double x);     // 1 / sinh^2(x/2)
double entropy(double x);                // S / k
double log_partition(double x);          // ln Z
}  // namespace oscillator

}  // namespace rlc
