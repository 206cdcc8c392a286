#include "rlcthermo/params.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rlcthermo/error.hpp"

namespace rlc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::OverdampedDomain: return "overdamped-domain";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::HermiticityViolation: return "hermiticity-violation";
    case ErrorCode::EigensolverFailure: return "eigensolver-failure";
    case ErrorCode::StencilDomain: return "stencil-domain";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::UnknownTag: return "unknown-tag";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

std::string_view to_string(Parameter which) {
  switch (which) {
    case Parameter::Inductance: return "L";
    case Parameter::Capacitance: return "C";
    case Parameter::Resistance: return "R";
  }
  return "?";
}

Parameter parse_parameter(std::string_view tag) {
  if (tag == "L") return Parameter::Inductance;
  if (tag == "C") return Parameter::Capacitance;
  if (tag == "R") return Parameter::Resistance;
  throw Error(ErrorCode::UnknownTag, fmt::format("unknown circuit parameter '{}'", tag));
}

void validate(const CircuitParams& p) {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(p.inductance) || bad(p.capacitance) || bad(p.resistance) || bad(p.hbar) ||
      bad(p.boltzmann)) {
    throw Error(ErrorCode::InvalidParameter, "circuit parameters must be finite");
  }
  if (p.inductance <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("L must be > 0 (got {})", p.inductance));
  }
  if (p.capacitance <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("C must be > 0 (got {})", p.capacitance));
  }
  if (p.resistance < 0.0) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("R must be >= 0 (got {})", p.resistance));
  }
  if (p.hbar <= 0.0 || p.boltzmann <= 0.0) {
    throw Error(ErrorCode::InvalidParameter, "hbar and k must be > 0");
  }
}

double critical_resistance(const CircuitParams& p) {
  return std::sqrt(p.inductance / p.capacitance);
}

double omega_squared(const CircuitParams& p) {
  const double L = p.inductance;
  return 1.0 / (L * p.capacitance) - (p.resistance * p.resistance) / (L * L);
}

bool underdamped(const CircuitParams& p) { return omega_squared(p) > 0.0; }

void require_underdamped(const CircuitParams& p) {
  validate(p);
  if (!underdamped(p)) {
    throw Error(ErrorCode::OverdampedDomain,
                fmt::format("circuit is not underdamped: R = {} >= sqrt(L/C) = {}", p.resistance,
                            critical_resistance(p)));
  }
}

double parameter_value(const CircuitParams& p, Parameter which) {
  switch (which) {
    case Parameter::Inductance: return p.inductance;
    case Parameter::Capacitance: return p.capacitance;
    case Parameter::Resistance: return p.resistance;
  }
  return 0.0;
}

CircuitParams with_parameter(CircuitParams p, Parameter which, double value) {
  switch (which) {
    case Parameter::Inductance: p.inductance = value; break;
    case Parameter::Capacitance: p.capacitance = value; break;
    case Parameter::Resistance: p.resistance = value; break;
  }
  return p;
}

std::string describe(const CircuitParams& p) {
  return fmt::format("L={:.17g} C={:.17g} R={:.17g} hbar={:.17g} k={:.17g}", p.inductance,
                     p.capacitance, p.resistance, p.hbar, p.boltzmann);
}

}  // namespace rlc
