#include "rlcthermo/thermal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SparseCore>
#include <fmt/format.h>
#include <lapacke.h>

#include "rlcthermo/error.hpp"

namespace rlc {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kGaugeRealTolerance = 1e-13;

using Index = Eigen::Index;

// Index sets that the matrix does not couple to each other.
std::vector<std::vector<Index>> decoupled_blocks(const ComplexMatrix& h) {
  const Index n = h.rows();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      if (h(i, j) != Complex(0.0, 0.0)) {
        const Index a = find(i);
        const Index b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Index>> blocks;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const Index root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

struct BlockEigen {
  std::vector<double> values;
  ComplexMatrix vectors;  // block-local
};

[[noreturn]] void solver_failure(const char* routine, lapack_int info, Index dim) {
  throw Error(ErrorCode::EigensolverFailure,
              fmt::format("{} failed (info = {}) on a block of dim {}", routine, info, dim));
}

// Tries to find unit phases d with conj(d_i) B_ij d_j real for all i, j.
// Phases are fixed along a breadth-first spanning tree of the coupling graph
// and then verified on every entry.
bool real_gauge(const ComplexMatrix& block, std::vector<Complex>& phase, Eigen::MatrixXd& real) {
  const Index n = block.rows();
  phase.assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  std::vector<Index> queue{0};
  phase[0] = 1.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Index i = queue[head];
    for (Index j = 0; j < n; ++j) {
      const Complex hij = block(i, j);
      if (phase[j] != Complex(0.0, 0.0) || hij == Complex(0.0, 0.0)) continue;
      const Complex z = phase[i] * std::conj(hij) / std::abs(hij);
      phase[j] = z / std::abs(z);
      queue.push_back(j);
    }
  }
  // Every index is reachable because the block is connected.
  const double scale = std::max(block.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  real.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Complex g = std::conj(phase[i]) * block(i, j) * phase[j];
      if (std::abs(g.imag()) > kGaugeRealTolerance * scale) return false;
      real(i, j) = g.real();
    }
  }
  return true;
}

BlockEigen solve_block(const ComplexMatrix& block, bool want_vectors) {
  const Index n = block.rows();
  BlockEigen out;
  out.values.resize(static_cast<std::size_t>(n));
  const char job = want_vectors ? 'V' : 'N';
  std::vector<Complex> phase;
  Eigen::MatrixXd real;
  if (real_gauge(block, phase, real)) {
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, job, 'U', static_cast<lapack_int>(n), real.data(),
                       static_cast<lapack_int>(n), out.values.data());
    if (info != 0) solver_failure("dsyevd", info, n);
    if (want_vectors) {
      out.vectors = real.cast<Complex>();
      for (Index i = 0; i < n; ++i) out.vectors.row(i) *= phase[i];
    }
    return out;
  }
  ComplexMatrix work = block;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, job, 'U', static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double*>(work.data()), static_cast<lapack_int>(n),
      out.values.data());
  if (info != 0) solver_failure("zheevd", info, n);
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

}  // namespace

Spectrum diagonalize(const TruncatedOperator& hamiltonian, Eigenvectors policy) {
  const ComplexMatrix& h = hamiltonian.matrix();
  if (!hamiltonian.hermitian() && hamiltonian.hermiticity_defect() > kHermitianTolerance) {
    throw Error(ErrorCode::HermiticityViolation,
                fmt::format("diagonalize needs a Hermitian operator (defect {:.3e})",
                            hamiltonian.hermiticity_defect()));
  }
  const bool want_vectors = policy == Eigenvectors::Compute;
  const Index n = h.rows();

  struct Pair {
    double value;
    std::size_t block;
    Index column;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  const auto blocks = decoupled_blocks(h);
  std::vector<BlockEigen> solved;
  solved.reserve(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const auto m = static_cast<Index>(idx.size());
    ComplexMatrix block(m, m);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) block(i, j) = h(idx[i], idx[j]);
    }
    solved.push_back(solve_block(block, want_vectors));
    for (Index k = 0; k < m; ++k) pairs.push_back({solved.back().values[k], b, k});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.value < b.value; });

  Spectrum spectrum;
  spectrum.basis = hamiltonian.basis();
  spectrum.energies.reserve(pairs.size());
  if (want_vectors) spectrum.vectors = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Pair& pr = pairs[k];
    spectrum.energies.push_back(pr.value);
    if (!want_vectors) continue;
    const auto& idx = blocks[pr.block];
    const auto& vecs = solved[pr.block].vectors;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      spectrum.vectors(idx[i], static_cast<Index>(k)) = vecs(static_cast<Index>(i), pr.column);
    }
  }
  return spectrum;
}

double max_residual(const TruncatedOperator& hamiltonian, const Spectrum& spectrum) {
  if (!spectrum.has_vectors()) {
    throw Error(ErrorCode::Precondition, "residual needs eigenvectors");
  }
  const ComplexMatrix hv = hamiltonian.matrix() * spectrum.vectors;
  double worst = 0.0;
  for (Index k = 0; k < hv.cols(); ++k) {
    const double e = spectrum.energies[k];
    const double r = (hv.col(k) - e * spectrum.vectors.col(k)).norm() / std::max(1.0, std::abs(e));
    worst = std::max(worst, r);
  }
  return worst;
}

double orthonormality_defect(const Spectrum& spectrum) {
  const auto n = spectrum.vectors.cols();
  const ComplexMatrix gram = spectrum.vectors.adjoint() * spectrum.vectors;
  return (gram - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

ThermalState thermal_state(const Spectrum& spectrum, double beta) {
  return thermal_state(spectrum.energies, beta);
}

ThermalState thermal_state(std::span<const double> energies, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidParameter, fmt::format("beta must be > 0 (got {})", beta));
  }
  if (energies.empty()) throw Error(ErrorCode::InvalidDimension, "empty spectrum");
  ThermalState st;
  st.beta = beta;
  st.ground_energy = energies.front();
  double sum = 0.0;
  for (double e : energies) sum += std::exp(-beta * (e - st.ground_energy));
  const double log_sum = std::log(sum);
  st.log_partition = log_sum - beta * st.ground_energy;
  st.probabilities.reserve(energies.size());
  st.log_probabilities.reserve(energies.size());
  for (double e : energies) {
    const double lp = -beta * (e - st.ground_energy) - log_sum;
    st.log_probabilities.push_back(lp);
    st.probabilities.push_back(std::exp(lp));
  }
  return st;
}

ThermalState distribution_state(std::vector<double> probabilities) {
  if (probabilities.empty()) throw Error(ErrorCode::InvalidDimension, "empty distribution");
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidParameter, "probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidParameter,
                fmt::format("probabilities sum to {} instead of 1", total));
  }
  ThermalState st;
  st.log_probabilities.reserve(probabilities.size());
  for (double p : probabilities) {
    st.log_probabilities.push_back(p > 0.0 ? std::log(p)
                                           : -std::numeric_limits<double>::infinity());
  }
  st.probabilities = std::move(probabilities);
  return st;
}

std::vector<Complex> diagonal_elements(const Spectrum& spectrum, const TruncatedOperator& op) {
  if (!spectrum.has_vectors()) {
    throw Error(ErrorCode::Precondition, "expectation values need eigenvectors");
  }
  if (op.basis() != spectrum.basis) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("operator basis {} does not match spectrum basis {}",
                            op.basis().tag(), spectrum.basis.tag()));
  }
  const Eigen::SparseMatrix<Complex> sparse = op.matrix().sparseView();
  const ComplexMatrix av = sparse * spectrum.vectors;
  std::vector<Complex> out(static_cast<std::size_t>(av.cols()));
  for (Index k = 0; k < av.cols(); ++k) out[k] = spectrum.vectors.col(k).dot(av.col(k));
  return out;
}

double ensemble_average(const ThermalState& state, const Spectrum& spectrum,
                        const TruncatedOperator& op) {
  const auto diag = diagonal_elements(spectrum, op);
  Complex sum(0.0, 0.0);
  for (std::size_t n = 0; n < diag.size(); ++n) sum += state.probabilities[n] * diag[n];
  if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, std::abs(sum.real()))) {
    throw Error(ErrorCode::HermiticityViolation,
                fmt::format("ensemble average has imaginary part {:.3e}", sum.imag()));
  }
  return sum.real();
}

double weighted_average(const ThermalState& state, std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n) sum += state.probabilities[n] * values[n];
  return sum;
}

double internal_energy(const ThermalState& state, std::span<const double> energies) {
  return weighted_average(state, energies);
}

double internal_energy(const ThermalState& state, const Spectrum& spectrum) {
  return internal_energy(state, spectrum.energies);
}

double fluctuation(const ThermalState& state, std::span<const double> energies) {
  const double mean = internal_energy(state, energies);
  double sum = 0.0;
  for (std::size_t n = 0; n < energies.size(); ++n) {
    const double d = energies[n] - mean;
    sum += state.probabilities[n] * d * d;
  }
  return sum;
}

double fluctuation(const ThermalState& state, const Spectrum& spectrum) {
  return fluctuation(state, spectrum.energies);
}

double von_neumann_entropy(const ThermalState& state, double boltzmann) {
  double s = 0.0;
  for (std::size_t n = 0; n < state.probabilities.size(); ++n) {
    const double p = state.probabilities[n];
    if (p > 0.0) s -= p * state.log_probabilities[n];
  }
  return boltzmann * s;
}

double free_energy(const ThermalState& state) { return -state.log_partition / state.beta; }

std::pair<CheckResult, CheckResult> thermo_identities(const ThermalState& state,
                                                      const Spectrum& spectrum,
                                                      double boltzmann) {
  const double u = internal_energy(state, spectrum);
  const double s = von_neumann_entropy(state, boltzmann);
  const double t = 1.0 / (boltzmann * state.beta);
  CheckContext ctx;
  ctx.beta = state.beta;
  ctx.n_used = spectrum.dim();
  auto free = make_check("free_energy_identity", free_energy(state), u - t * s, 1e-10, ctx);
  auto entropy = make_check("entropy_identity", s, u / t + boltzmann * state.log_partition,
                            1e-10, ctx);
  return {std::move(free), std::move(entropy)};
}

std::string_view to_string(Observable observable) {
  switch (observable) {
    case Observable::InternalEnergy: return "internal_energy";
    case Observable::Entropy: return "entropy";
    case Observable::Fluctuation: return "fluctuation";
    case Observable::FreeEnergy: return "free_energy";
    case Observable::CrossAverage: return "cross_average";
    case Observable::ResistanceDerivativeAverage: return "dH_dR_average";
    case Observable::ResistorEnergy: return "resistor_energy";
  }
  return "unknown";
}

Observable parse_observable(std::string_view tag) {
  for (auto o : {Observable::InternalEnergy, Observable::Entropy, Observable::Fluctuation,
                 Observable::FreeEnergy, Observable::CrossAverage,
                 Observable::ResistanceDerivativeAverage, Observable::ResistorEnergy}) {
    if (to_string(o) == tag) return o;
  }
  throw Error(ErrorCode::UnknownTag, fmt::format("unknown observable '{}'", tag));
}

bool needs_eigenvectors(Observable observable) {
  return observable == Observable::CrossAverage ||
         observable == Observable::ResistanceDerivativeAverage ||
         observable == Observable::ResistorEnergy;
}

namespace {

double cross_average(const OracleSolution& s) {
  return ensemble_average(s.state, s.spectrum, assemble(QuadraticForm{0.0, 0.0, 1.0}, s.basis));
}

// Magnitude below which an observable counts as zero for convergence tests.
double observable_scale(Observable o, const CircuitParams& p, const FockBasis& basis) {
  const double energy = p.hbar * basis.omega0;
  switch (o) {
    case Observable::Fluctuation: return energy * energy;
    case Observable::Entropy: return p.boltzmann;
    case Observable::CrossAverage: return p.hbar;
    case Observable::ResistanceDerivativeAverage: return p.hbar / p.inductance;
    default: return energy;
  }
}

}  // namespace

double OracleSolution::value(Observable observable) const {
  switch (observable) {
    case Observable::InternalEnergy: return internal_energy(state, spectrum);
    case Observable::Entropy: return von_neumann_entropy(state, params.boltzmann);
    case Observable::Fluctuation: return fluctuation(state, spectrum);
    case Observable::FreeEnergy: return free_energy(state);
    case Observable::CrossAverage: return cross_average(*this);
    case Observable::ResistanceDerivativeAverage:
      return cross_average(*this) / (2.0 * params.inductance);
    case Observable::ResistorEnergy:
      return params.resistance / (2.0 * params.inductance) * cross_average(*this);
  }
  return std::nan("");
}

OracleSolution solve_at_dim(const CircuitParams& params, double beta, std::size_t dim,
                            Eigenvectors policy) {
  require_underdamped(params);
  OracleSolution s;
  s.params = params;
  s.basis = FockBasis::reference(params, dim);
  s.spectrum = diagonalize(build_hamiltonian(params, s.basis), policy);
  s.state = thermal_state(s.spectrum, beta);
  s.report.n_used = dim;
  s.report.tail_mass = s.state.probabilities.back();
  s.report.converged = s.report.tail_mass < LadderOptions{}.tail_tolerance;
  return s;
}

OracleSolution solve_converged(const CircuitParams& params, double beta,
                               std::span<const Observable> tracked,
                               const LadderOptions& options) {
  require_underdamped(params);
  if (tracked.empty()) throw Error(ErrorCode::Precondition, "no observable to converge");
  if (options.initial_dim < 2 || options.max_dim < options.initial_dim) {
    throw Error(ErrorCode::InvalidDimension,
                fmt::format("bad ladder {}..{}", options.initial_dim, options.max_dim));
  }
  const bool vectors = std::any_of(tracked.begin(), tracked.end(), needs_eigenvectors);
  const auto policy = vectors ? Eigenvectors::Compute : Eigenvectors::Skip;

  std::vector<ConvergenceStep> trace;
  std::vector<double> previous;
  for (std::size_t dim = options.initial_dim;; dim *= 2) {
    OracleSolution s = solve_at_dim(params, beta, dim, policy);
    std::vector<double> values;
    for (auto o : tracked) values.push_back(s.value(o));
    double change = std::numeric_limits<double>::infinity();
    if (!previous.empty()) {
      change = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double floor = 1e-6 * observable_scale(tracked[i], params, s.basis);
        const double rel =
            std::abs(values[i] - previous[i]) / std::max(std::abs(values[i]), floor);
        change = std::max(change, rel);
      }
    }
    const double tail = s.state.probabilities.back();
    trace.push_back({dim, values.front(), tail, change});
    const bool done = change < options.tolerance && tail < options.tail_tolerance;
    if (done || dim * 2 > options.max_dim) {
      s.report.n_used = dim;
      s.report.tail_mass = tail;
      s.report.successive_change = change;
      s.report.converged = done;
      s.report.trace = std::move(trace);
      return s;
    }
    previous = std::move(values);
  }
}

std::pair<double, ConvergenceReport> converged_observable(const CircuitParams& params,
                                                          double beta, Observable observable,
                                                          double tolerance) {
  LadderOptions options;
  options.tolerance = tolerance;
  const Observable tracked[] = {observable};
  auto s = solve_converged(params, beta, tracked, options);
  return {s.value(observable), std::move(s.report)};
}

}  // namespace rlc
