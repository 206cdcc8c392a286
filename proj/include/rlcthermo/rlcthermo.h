/* C interface to the rlcthermo library.
 *
 * Every function returns an rlc_status. On failure the message for the
 * calling thread is available from rlc_last_error() until the next call on
 * that thread. Handles are opaque and must be released with their matching
 * *_free function; passing NULL to a *_free function is a no-op.
 */
#ifndef RLCTHERMO_H
#define RLCTHERMO_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RLC_API __declspec(dllexport)
#else
#define RLC_API __attribute__((visibility("default")))
#endif

typedef enum rlc_status {
  RLC_OK = 0,
  RLC_INVALID_DIMENSION = 1,
  RLC_INVALID_PARAMETER = 2,
  RLC_OVERDAMPED = 3,
  RLC_DIMENSION_MISMATCH = 4,
  RLC_HERMITICITY_VIOLATION = 5,
  RLC_EIGENSOLVER_FAILURE = 6,
  RLC_STENCIL_DOMAIN = 7,
  RLC_PRECONDITION = 8,
  RLC_UNKNOWN_TAG = 9,
  RLC_CONFIG = 10,
  RLC_IO = 11,
  RLC_NULL_ARGUMENT = 12,
  RLC_INTERNAL = 13
} rlc_status;

typedef struct rlc_circuit {
  double inductance;  /* L > 0 */
  double capacitance; /* C > 0 */
  double resistance;  /* R >= 0 */
  double hbar;        /* > 0 */
  double boltzmann;   /* k > 0 */
} rlc_circuit;

/* Circuit with L = C = hbar = k = 1 and R = 0. */
RLC_API rlc_circuit rlc_circuit_default(void);

RLC_API const char* rlc_version(void);
RLC_API const char* rlc_last_error(void);
RLC_API const char* rlc_status_name(rlc_status status);

/* ---- closed forms (underdamped circuits only) ---- */
RLC_API rlc_status rlc_omega(const rlc_circuit* circuit, double* omega);
RLC_API rlc_status rlc_internal_energy_cf(const rlc_circuit* circuit, double beta, double* out);
RLC_API rlc_status rlc_entropy_cf(const rlc_circuit* circuit, double beta, double* out);
RLC_API rlc_status rlc_fluctuation_cf(const rlc_circuit* circuit, double beta, double* out);
RLC_API rlc_status rlc_resistor_energy_cf(const rlc_circuit* circuit, double beta, double* out);
RLC_API rlc_status rlc_dS_dR_cf(const rlc_circuit* circuit, double beta, double* out);

/* ---- exact-diagonalization oracle ---- */

/* Observable tags accepted by rlc_thermal_observable: "internal_energy",
 * "entropy", "fluctuation", "free_energy", "cross_average", "dH_dR_average",
 * "resistor_energy". */
typedef struct rlc_thermal rlc_thermal;

/* Gibbs state on the truncation ladder (N doubles from 32 up to max_dim
 * until internal energy and entropy change by less than tolerance). */
RLC_API rlc_status rlc_thermal_solve(const rlc_circuit* circuit, double beta, size_t max_dim,
                                     double tolerance, rlc_thermal** out);
/* Gibbs state at a fixed truncation dimension. */
RLC_API rlc_status rlc_thermal_solve_at(const rlc_circuit* circuit, double beta, size_t dim,
                                        rlc_thermal** out);
RLC_API void rlc_thermal_free(rlc_thermal* state);
RLC_API rlc_status rlc_thermal_observable(const rlc_thermal* state, const char* tag, double* out);
RLC_API rlc_status rlc_thermal_dim(const rlc_thermal* state, size_t* dim);
RLC_API rlc_status rlc_thermal_converged(const rlc_thermal* state, int* converged);
/* Copies min(capacity, dim) ascending energies into energies. */
RLC_API rlc_status rlc_thermal_energies(const rlc_thermal* state, double* energies,
                                        size_t capacity);

/* ---- configuration and commands ---- */
typedef struct rlc_config rlc_config;
typedef struct rlc_output rlc_output;

/* The shipped defaults, with text (may be NULL) merged on top. */
RLC_API rlc_status rlc_config_parse(const char* text, rlc_config** out);
RLC_API rlc_status rlc_config_load_file(const char* path, rlc_config** out);
RLC_API void rlc_config_free(rlc_config* config);
/* Overrides one key, e.g. ("check.tolerance", "0") or ("output.format", "\"json\""). */
RLC_API rlc_status rlc_config_set(rlc_config* config, const char* key, const char* value);
/* Hex FNV-1a hash of the effective configuration; valid while config lives. */
RLC_API const char* rlc_config_hash(const rlc_config* config);

/* Runs "check", "sweep-entropy", "sweep" or "convergence". Command failures
 * are reported through the output's exit code (0, 1 or 2), not the status. */
RLC_API rlc_status rlc_run(const char* command, const rlc_config* config, rlc_output** out);
RLC_API void rlc_output_free(rlc_output* output);
RLC_API const char* rlc_output_content(const rlc_output* output);
RLC_API const char* rlc_output_summary(const rlc_output* output);
RLC_API int rlc_output_exit_code(const rlc_output* output);

#ifdef __cplusplus
}
#endif

#endif /* RLCTHERMO_H */
