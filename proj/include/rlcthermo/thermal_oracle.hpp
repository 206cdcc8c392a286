#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "rlcthermo/check_result.hpp"
#include "rlcthermo/fock_operators.hpp"
#include "rlcthermo/params.hpp"

namespace rlc {

/// Eigenpairs of a truncated Hamiltonian, eigenvalues ascending.
struct Spectrum {
  std::vector<double> energies;
  /// Orthonormal eigenvectors as columns, in the source operator's basis.
  /// Empty when the spectrum was computed without vectors.
  ComplexMatrix vectors;
  FockBasis basis;

  std::size_t dim() const { return energies.size(); }
  bool has_vectors() const { return vectors.cols() > 0; }
};

enum class Eigenvectors { Compute, Skip };

/// Dense Hermitian eigensolver.
///
/// The matrix is split into blocks that do not couple to each other and each
/// block is rotated by a diagonal phase so that it becomes real symmetric when
/// possible; real blocks go to LAPACK dsyevd, the rest to zheevd. Both steps
/// are exact similarity transforms, so the result is the spectrum of the full
/// matrix.
Spectrum diagonalize(const TruncatedOperator& hamiltonian,
                     Eigenvectors policy = Eigenvectors::Compute);

/// max_n |H v_n - E_n v_n|_2 / max(1, |E_n|)
double max_residual(const TruncatedOperator& hamiltonian, const Spectrum& spectrum);
/// max |V^dagger V - I|
double orthonormality_defect(const Spectrum& spectrum);

/// Gibbs weights of a spectrum at inverse temperature beta.
struct ThermalState {
  double beta = 0.0;
  double ground_energy = 0.0;
  /// ln Z = ln(sum_n exp(-beta (E_n - E_0))) - beta E_0
  double log_partition = 0.0;
  std::vector<double> probabilities;
  std::vector<double> log_probabilities;
};

ThermalState thermal_state(const Spectrum& spectrum, double beta);
ThermalState thermal_state(std::span<const double> energies, double beta);

/// Arbitrary normalized distribution (beta and ln Z are left at zero). Used
/// for entropy of non-Gibbs states, e.g. a pure state.
ThermalState distribution_state(std::vector<double> probabilities);

/// <v_n|A|v_n> for every eigenvector.
std::vector<Complex> diagonal_elements(const Spectrum& spectrum, const TruncatedOperator& op);

/// sum_n p_n <v_n|A|v_n>; throws HermiticityViolation when the imaginary part
/// exceeds 1e-10 max(1, |real part|).
double ensemble_average(const ThermalState& state, const Spectrum& spectrum,
                        const TruncatedOperator& op);
double weighted_average(const ThermalState& state, std::span<const double> values);

double internal_energy(const ThermalState& state, std::span<const double> energies);
double internal_energy(const ThermalState& state, const Spectrum& spectrum);
double fluctuation(const ThermalState& state, std::span<const double> energies);
double fluctuation(const ThermalState& state, const Spectrum& spectrum);
/// -k sum p ln p, with 0 ln 0 = 0.
double von_neumann_entropy(const ThermalState& state, double boltzmann = 1.0);
/// -ln Z / beta
double free_energy(const ThermalState& state);

/// F = <H> - TS and S = <H>/T + k ln Z, relative tolerance 1e-10.
std::pair<CheckResult, CheckResult> thermo_identities(const ThermalState& state,
                                                      const Spectrum& spectrum,
                                                      double boltzmann = 1.0);

enum class Observable {
  InternalEnergy,
  Entropy,
  Fluctuation,
  FreeEnergy,
  CrossAverage,    // <pq + qp>
  ResistanceDerivativeAverage,  // <dH/dR> = <pq + qp> / (2L)
  ResistorEnergy,  // (R / 2L) <pq + qp>
};

std::string_view to_string(Observable observable);
Observable parse_observable(std::string_view tag);
bool needs_eigenvectors(Observable observable);

struct ConvergenceStep {
  std::size_t dim = 0;
  double value = 0.0;
  double tail_mass = 0.0;
  double change = 0.0;
};

struct ConvergenceReport {
  std::size_t n_used = 0;
  double tail_mass = 0.0;
  double successive_change = 0.0;
  bool converged = false;
  std::vector<ConvergenceStep> trace;
};

struct LadderOptions {
  std::size_t initial_dim = 32;
  std::size_t max_dim = 1024;
  double tail_tolerance = 1e-14;
  double tolerance = 1e-8;
};

/// Gibbs state of a circuit on a fixed truncated basis.
struct OracleSolution {
  CircuitParams params;
  FockBasis basis;
  Spectrum spectrum;
  ThermalState state;
  ConvergenceReport report;

  double value(Observable observable) const;
};

OracleSolution solve_at_dim(const CircuitParams& params, double beta, std::size_t dim,
                            Eigenvectors policy = Eigenvectors::Compute);

/// Doubling ladder N0, 2 N0, ... up to the cap. Stops once every tracked
/// observable changed by less than options.tolerance (relative) on the last
/// doubling and the highest level carries less than options.tail_tolerance
/// weight. The first tracked observable is recorded in the trace. Reaching
/// the cap returns the last solution with converged = false.
OracleSolution solve_converged(const CircuitParams& params, double beta,
                               std::span<const Observable> tracked,
                               const LadderOptions& options = {});

std::pair<double, ConvergenceReport> converged_observable(const CircuitParams& params,
                                                          double beta, Observable observable,
                                                          double tolerance);

}  // namespace rlc
