#pragma once

#include <string>
#include <string_view>

namespace rlc {

/// Physical parameters of a series RLC circuit plus the unit constants.
/// Natural units (hbar = k = 1) are the default.
struct CircuitParams {
  double inductance = 1.0;
  double capacitance = 1.0;
  double resistance = 0.0;
  double hbar = 1.0;
  double boltzmann = 1.0;

  bool operator==(const CircuitParams&) const = default;
};

/// Circuit parameter a Hamiltonian derivative is taken with respect to.
enum class Parameter { Inductance, Capacitance, Resistance };

std::string_view to_string(Parameter which);
/// Accepts "L", "C", "R" (case-sensitive). Throws UnknownTag otherwise.
Parameter parse_parameter(std::string_view tag);

/// Throws InvalidParameter unless L > 0, C > 0, R >= 0, hbar > 0, k > 0 and
/// every field is finite.
void validate(const CircuitParams& params);

/// sqrt(L/C): the resistance at which the mode frequency vanishes.
double critical_resistance(const CircuitParams& params);

/// 1/(LC) - R^2/L^2; positive exactly when the circuit is underdamped.
double omega_squared(const CircuitParams& params);

bool underdamped(const CircuitParams& params);

/// validate() plus the underdamped requirement (OverdampedDomain otherwise).
void require_underdamped(const CircuitParams& params);

double parameter_value(const CircuitParams& params, Parameter which);
CircuitParams with_parameter(CircuitParams params, Parameter which, double value);

/// Inverse temperature -> temperature, T = 1/(k beta).
inline double temperature(const CircuitParams& params, double beta) {
  return 1.0 / (params.boltzmann * beta);
}

std::string describe(const CircuitParams& params);

}  // namespace rlc
