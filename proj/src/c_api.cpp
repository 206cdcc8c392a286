#include "rlcthermo/rlcthermo.h"

#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "rlcthermo/closed_forms.hpp"
#include "rlcthermo/commands.hpp"
#include "rlcthermo/error.hpp"
#include "rlcthermo/thermal_oracle.hpp"

struct rlc_thermal {
  rlc::OracleSolution solution;
};

struct rlc_config {
  rlc::Config config;
  mutable std::string hash;
};

struct rlc_output {
  rlc::CommandOutput output;
};

namespace {

thread_local std::string last_error;

rlc_status status_of(rlc::ErrorCode code) { return static_cast<rlc_status>(code); }

template <class F>
rlc_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return RLC_OK;
  } catch (const rlc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return RLC_INTERNAL;
}

rlc_status null_argument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return RLC_NULL_ARGUMENT;
}

rlc::CircuitParams to_params(const rlc_circuit& c) {
  rlc::CircuitParams p{c.inductance, c.capacitance, c.resistance, c.hbar, c.boltzmann};
  rlc::validate(p);
  return p;
}

template <class F>
rlc_status closed_form(const rlc_circuit* circuit, double beta, double* out, F&& f) {
  if (!circuit) return null_argument("circuit");
  if (!out) return null_argument("out");
  return guarded([&] { *out = f(to_params(*circuit), beta); });
}

}  // namespace

extern "C" {

rlc_circuit rlc_circuit_default(void) { return rlc_circuit{1.0, 1.0, 0.0, 1.0, 1.0}; }

const char* rlc_version(void) { return rlc::kToolVersion.data(); }

const char* rlc_last_error(void) { return last_error.c_str(); }

const char* rlc_status_name(rlc_status status) {
  switch (status) {
    case RLC_OK: return "ok";
    case RLC_NULL_ARGUMENT: return "null-argument";
    case RLC_INTERNAL: return "internal";
    default: break;
  }
  if (status >= RLC_INVALID_DIMENSION && status <= RLC_IO) {
    return rlc::to_string(static_cast<rlc::ErrorCode>(status)).data();
  }
  return "unknown";
}

rlc_status rlc_omega(const rlc_circuit* circuit, double* omega) {
  return closed_form(circuit, 1.0, omega,
                     [](const rlc::CircuitParams& p, double) { return rlc::omega(p).omega; });
}

rlc_status rlc_internal_energy_cf(const rlc_circuit* circuit, double beta, double* out) {
  return closed_form(circuit, beta, out, rlc::internal_energy_cf);
}

rlc_status rlc_entropy_cf(const rlc_circuit* circuit, double beta, double* out) {
  return closed_form(circuit, beta, out, rlc::entropy_cf);
}

rlc_status rlc_fluctuation_cf(const rlc_circuit* circuit, double beta, double* out) {
  return closed_form(circuit, beta, out, rlc::fluctuation_cf);
}

rlc_status rlc_resistor_energy_cf(const rlc_circuit* circuit, double beta, double* out) {
  return closed_form(circuit, beta, out, rlc::resistor_energy_cf);
}

rlc_status rlc_dS_dR_cf(const rlc_circuit* circuit, double beta, double* out) {
  return closed_form(circuit, beta, out, rlc::dS_dR_cf);
}

rlc_status rlc_thermal_solve(const rlc_circuit* circuit, double beta, size_t max_dim,
                             double tolerance, rlc_thermal** out) {
  if (!circuit) return null_argument("circuit");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    rlc::LadderOptions options;
    options.max_dim = max_dim;
    options.tolerance = tolerance;
    if (max_dim < options.initial_dim) {
      throw rlc::Error(rlc::ErrorCode::InvalidDimension, "max_dim must be at least 32");
    }
    const rlc::Observable tracked[] = {rlc::Observable::InternalEnergy,
                                       rlc::Observable::Entropy};
    auto solution = rlc::solve_converged(to_params(*circuit), beta, tracked, options);
    // Re-solve at the chosen dimension with eigenvectors so that every
    // observable tag can be evaluated.
    auto report = solution.report;
    solution = rlc::solve_at_dim(solution.params, beta, report.n_used);
    solution.report = std::move(report);
    *out = new rlc_thermal{std::move(solution)};
  });
}

rlc_status rlc_thermal_solve_at(const rlc_circuit* circuit, double beta, size_t dim,
                                rlc_thermal** out) {
  if (!circuit) return null_argument("circuit");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto solution = rlc::solve_at_dim(to_params(*circuit), beta, dim);
    *out = new rlc_thermal{std::move(solution)};
  });
}

void rlc_thermal_free(rlc_thermal* state) { delete state; }

rlc_status rlc_thermal_observable(const rlc_thermal* state, const char* tag, double* out) {
  if (!state) return null_argument("state");
  if (!tag) return null_argument("tag");
  if (!out) return null_argument("out");
  return guarded([&] { *out = state->solution.value(rlc::parse_observable(tag)); });
}

rlc_status rlc_thermal_dim(const rlc_thermal* state, size_t* dim) {
  if (!state) return null_argument("state");
  if (!dim) return null_argument("dim");
  *dim = state->solution.spectrum.dim();
  return RLC_OK;
}

rlc_status rlc_thermal_converged(const rlc_thermal* state, int* converged) {
  if (!state) return null_argument("state");
  if (!converged) return null_argument("converged");
  *converged = state->solution.report.converged ? 1 : 0;
  return RLC_OK;
}

rlc_status rlc_thermal_energies(const rlc_thermal* state, double* energies, size_t capacity) {
  if (!state) return null_argument("state");
  if (!energies && capacity > 0) return null_argument("energies");
  const auto& e = state->solution.spectrum.energies;
  for (size_t i = 0; i < capacity && i < e.size(); ++i) energies[i] = e[i];
  return RLC_OK;
}

rlc_status rlc_config_parse(const char* text, rlc_config** out) {
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto config = text ? rlc::load_config(std::string_view(text)) : rlc::load_config();
    *out = new rlc_config{std::move(config), {}};
  });
}

rlc_status rlc_config_load_file(const char* path, rlc_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rlc::Error(rlc::ErrorCode::Io, std::string("cannot read config file ") + path);
    std::ostringstream text;
    text << in.rdbuf();
    *out = new rlc_config{rlc::load_config(text.str()), {}};
  });
}

void rlc_config_free(rlc_config* config) { delete config; }

rlc_status rlc_config_set(rlc_config* config, const char* key, const char* value) {
  if (!config) return null_argument("config");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] { config->config.set(key, value); });
}

const char* rlc_config_hash(const rlc_config* config) {
  if (!config) return "";
  config->hash = config->config.hash();
  return config->hash.c_str();
}

rlc_status rlc_run(const char* command, const rlc_config* config, rlc_output** out) {
  if (!command) return null_argument("command");
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new rlc_output{rlc::run_command(command, config->config)}; });
}

void rlc_output_free(rlc_output* output) { delete output; }

const char* rlc_output_content(const rlc_output* output) {
  return output ? output->output.content.c_str() : "";
}

const char* rlc_output_summary(const rlc_output* output) {
  return output ? output->output.summary.c_str() : "";
}

int rlc_output_exit_code(const rlc_output* output) {
  return output ? output->output.exit_code : rlc::kExitUsage;
}

}  // extern "C"
