#include "rlcthermo/fock_operators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rlcthermo/error.hpp"

namespace rlc {

namespace {

constexpr double kHermitianTolerance = 1e-12;

void require_dim(std::size_t dim) {
  if (dim < 2) {
    throw Error(ErrorCode::InvalidDimension,
                fmt::format("truncated basis needs dim >= 2 (got {})", dim));
  }
}

ComplexMatrix zeros(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix::Zero(n, n);
}

}  // namespace

FockBasis FockBasis::reference(const CircuitParams& params, std::size_t dim) {
  validate(params);
  require_dim(dim);
  return FockBasis{dim, params.inductance, 1.0 / std::sqrt(params.inductance * params.capacitance),
                   params.hbar};
}

FockBasis FockBasis::unit(std::size_t dim) {
  require_dim(dim);
  return FockBasis{dim, 1.0, 1.0, 1.0};
}

double FockBasis::charge_scale() const { return std::sqrt(hbar / (2.0 * inductance * omega0)); }

double FockBasis::flux_scale() const { return std::sqrt(hbar * inductance * omega0 / 2.0); }

std::string FockBasis::tag() const {
  return fmt::format("fock(dim={}, L={:.17g}, omega0={:.17g}, hbar={:.17g})", dim, inductance,
                     omega0, hbar);
}

TruncatedOperator::TruncatedOperator(ComplexMatrix entries, FockBasis basis, bool hermitian)
    : entries_(std::move(entries)), basis_(std::move(basis)), hermitian_(hermitian) {
  const auto n = static_cast<Eigen::Index>(basis_.dim);
  if (entries_.rows() != n || entries_.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("matrix is {}x{} but basis has dim {}", entries_.rows(),
                            entries_.cols(), basis_.dim));
  }
  if (hermitian_) {
    const double defect = hermiticity_defect();
    if (defect > kHermitianTolerance) {
      throw Error(ErrorCode::HermiticityViolation,
                  fmt::format("operator tagged Hermitian deviates by {:.3e}", defect));
    }
  }
}

double TruncatedOperator::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

TruncatedOperator TruncatedOperator::adjoint() const {
  return TruncatedOperator(entries_.adjoint(), basis_, hermitian_);
}

void require_same_basis(const TruncatedOperator& a, const TruncatedOperator& b) {
  if (a.basis() != b.basis()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("operators live on different bases: {} vs {}", a.basis().tag(),
                            b.basis().tag()));
  }
}

TruncatedOperator TruncatedOperator::operator+(const TruncatedOperator& rhs) const {
  require_same_basis(*this, rhs);
  return TruncatedOperator(entries_ + rhs.entries_, basis_, hermitian_ && rhs.hermitian_);
}

TruncatedOperator TruncatedOperator::operator-(const TruncatedOperator& rhs) const {
  require_same_basis(*this, rhs);
  return TruncatedOperator(entries_ - rhs.entries_, basis_, hermitian_ && rhs.hermitian_);
}

TruncatedOperator TruncatedOperator::operator*(const TruncatedOperator& rhs) const {
  require_same_basis(*this, rhs);
  return TruncatedOperator(entries_ * rhs.entries_, basis_, false);
}

TruncatedOperator TruncatedOperator::scaled(Complex factor) const {
  return TruncatedOperator(entries_ * factor, basis_, hermitian_ && factor.imag() == 0.0);
}

ComplexMatrix TruncatedOperator::leading_block(std::size_t size) const {
  const auto n = static_cast<Eigen::Index>(std::min(size, basis_.dim));
  return entries_.topLeftCorner(n, n);
}

QuadraticForm hamiltonian_form(const CircuitParams& params) {
  const double L = params.inductance;
  return QuadraticForm{1.0 / (2.0 * L), 1.0 / (2.0 * params.capacitance),
                       params.resistance / (2.0 * L)};
}

QuadraticForm derivative_form(const CircuitParams& params, Parameter which) {
  const double L = params.inductance;
  const double C = params.capacitance;
  switch (which) {
    case Parameter::Inductance:
      // -p^2/(2L^2) - R/(2L^2) (pq + qp)
      return QuadraticForm{-1.0 / (2.0 * L * L), 0.0, -params.resistance / (2.0 * L * L)};
    case Parameter::Capacitance:
      return QuadraticForm{0.0, -1.0 / (2.0 * C * C), 0.0};
    case Parameter::Resistance:
      return QuadraticForm{0.0, 0.0, 1.0 / (2.0 * L)};
  }
  throw Error(ErrorCode::UnknownTag, "unknown parameter");
}

bool form_positive_definite(const QuadraticForm& f) {
  return f.flux2 > 0.0 && f.charge2 > 0.0 && f.flux2 * f.charge2 - f.cross * f.cross > 0.0;
}

double form_frequency(const QuadraticForm& f) {
  if (!form_positive_definite(f)) return std::nan("");
  return 2.0 * std::sqrt(f.flux2 * f.charge2 - f.cross * f.cross);
}

QuadraticOperators build_quadratic_operators(const FockBasis& basis) {
  require_dim(basis.dim);
  const std::size_t N = basis.dim;
  const double sq2 = basis.charge_scale() * basis.charge_scale();
  const double sp2 = basis.flux_scale() * basis.flux_scale();
  ComplexMatrix q2 = zeros(N);
  ComplexMatrix p2 = zeros(N);
  ComplexMatrix cross = zeros(N);
  for (std::size_t n = 0; n < N; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    q2(i, i) = sq2 * (2.0 * n + 1.0);
    p2(i, i) = sp2 * (2.0 * n + 1.0);
    if (n + 2 < N) {
      // <n|a^2|n+2> = sqrt((n+1)(n+2))
      const double amp = std::sqrt((n + 1.0) * (n + 2.0));
      q2(i, i + 2) = q2(i + 2, i) = sq2 * amp;
      p2(i, i + 2) = p2(i + 2, i) = -sp2 * amp;
      // pq + qp = i hbar (a^dagger^2 - a^2)
      cross(i + 2, i) = Complex(0.0, basis.hbar * amp);
      cross(i, i + 2) = Complex(0.0, -basis.hbar * amp);
    }
  }
  return QuadraticOperators{TruncatedOperator(std::move(q2), basis, true),
                            TruncatedOperator(std::move(p2), basis, true),
                            TruncatedOperator(std::move(cross), basis, true)};
}

TruncatedOperator assemble(const QuadraticForm& form, const FockBasis& basis) {
  require_dim(basis.dim);
  const std::size_t N = basis.dim;
  const double sq2 = basis.charge_scale() * basis.charge_scale();
  const double sp2 = basis.flux_scale() * basis.flux_scale();
  const double diag = form.flux2 * sp2 + form.charge2 * sq2;
  const double even = form.charge2 * sq2 - form.flux2 * sp2;
  ComplexMatrix m = zeros(N);
  for (std::size_t n = 0; n < N; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    m(i, i) = diag * (2.0 * n + 1.0);
    if (n + 2 < N) {
      const double amp = std::sqrt((n + 1.0) * (n + 2.0));
      m(i, i + 2) = Complex(even * amp, -form.cross * basis.hbar * amp);
      m(i + 2, i) = Complex(even * amp, form.cross * basis.hbar * amp);
    }
  }
  return TruncatedOperator(std::move(m), basis, true);
}

LadderPair build_ladder(std::size_t dim) { return build_ladder(FockBasis::unit(dim)); }

LadderPair build_ladder(const FockBasis& basis) {
  require_dim(basis.dim);
  ComplexMatrix a = zeros(basis.dim);
  for (std::size_t n = 1; n < basis.dim; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    a(i - 1, i) = std::sqrt(static_cast<double>(n));
  }
  ComplexMatrix ad = a.adjoint();
  return LadderPair{TruncatedOperator(std::move(a), basis, false),
                    TruncatedOperator(std::move(ad), basis, false)};
}

Quadratures build_quadratures(const CircuitParams& params, std::size_t dim) {
  return build_quadratures(FockBasis::reference(params, dim));
}

Quadratures build_quadratures(const FockBasis& basis) {
  require_dim(basis.dim);
  const double sq = basis.charge_scale();
  const double sp = basis.flux_scale();
  ComplexMatrix q = zeros(basis.dim);
  ComplexMatrix p = zeros(basis.dim);
  for (std::size_t n = 1; n < basis.dim; ++n) {
    const auto i = static_cast<Eigen::Index>(n);
    const double amp = std::sqrt(static_cast<double>(n));
    q(i - 1, i) = q(i, i - 1) = sq * amp;
    p(i, i - 1) = Complex(0.0, sp * amp);
    p(i - 1, i) = Complex(0.0, -sp * amp);
  }
  return Quadratures{TruncatedOperator(std::move(q), basis, true),
                     TruncatedOperator(std::move(p), basis, true)};
}

TruncatedOperator build_hamiltonian(const CircuitParams& params, std::size_t dim) {
  return build_hamiltonian(params, FockBasis::reference(params, dim));
}

TruncatedOperator build_hamiltonian(const CircuitParams& params, const FockBasis& basis) {
  validate(params);
  return assemble(hamiltonian_form(params), basis);
}

TruncatedOperator build_parameter_derivative(const CircuitParams& params, std::size_t dim,
                                             Parameter which) {
  return build_parameter_derivative(params, FockBasis::reference(params, dim), which);
}

TruncatedOperator build_parameter_derivative(const CircuitParams& params, const FockBasis& basis,
                                             Parameter which) {
  validate(params);
  return assemble(derivative_form(params, which), basis);
}

TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_basis(a, b);
  ComplexMatrix m = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return TruncatedOperator(std::move(m), a.basis(), false);
}

double max_block_deviation(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t size) {
  const auto n = static_cast<Eigen::Index>(size);
  if (a.rows() < n || b.rows() < n) {
    throw Error(ErrorCode::DimensionMismatch, "block larger than operator");
  }
  return (a.topLeftCorner(n, n) - b.topLeftCorner(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace rlc
