#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "rlcthermo/params.hpp"

namespace rlc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Number basis of a reference oscillator. Operators are only comparable when
/// they were built on the same basis (same dimension and same reference).
///
/// The reference is the R = 0 oscillator of some circuit: inductance L_ref and
/// frequency omega0 = 1/sqrt(L_ref C_ref). Quadratures in this basis are
///   q = sqrt(hbar / (2 L_ref omega0)) (a + a^dagger)
///   p = i sqrt(hbar L_ref omega0 / 2) (a^dagger - a)
struct FockBasis {
  std::size_t dim = 0;
  double inductance = 1.0;
  double omega0 = 1.0;
  double hbar = 1.0;

  /// Number basis of the R = 0 oscillator with the circuit's own L and C.
  static FockBasis reference(const CircuitParams& params, std::size_t dim);
  /// Bare number basis (L = omega0 = hbar = 1), used for ladder operators.
  static FockBasis unit(std::size_t dim);

  double charge_scale() const;  // sqrt(hbar / (2 L omega0))
  double flux_scale() const;    // sqrt(hbar L omega0 / 2)
  std::string tag() const;

  bool operator==(const FockBasis&) const = default;
};

/// Finite matrix of an operator on a FockBasis. Dense storage.
class TruncatedOperator {
 public:
  TruncatedOperator(ComplexMatrix entries, FockBasis basis, bool hermitian);

  std::size_t dim() const { return basis_.dim; }
  const FockBasis& basis() const { return basis_; }
  const ComplexMatrix& matrix() const { return entries_; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_(row, col); }

  /// Tagged Hermitian at construction (q, p, H, dH/dchi). Ladder operators are not.
  bool hermitian() const { return hermitian_; }
  /// max_ij |A_ij - conj(A_ji)|
  double hermiticity_defect() const;

  TruncatedOperator adjoint() const;

  TruncatedOperator operator+(const TruncatedOperator& rhs) const;
  TruncatedOperator operator-(const TruncatedOperator& rhs) const;
  TruncatedOperator operator*(const TruncatedOperator& rhs) const;
  TruncatedOperator scaled(Complex factor) const;

  /// Leading block [0, size) x [0, size).
  ComplexMatrix leading_block(std::size_t size) const;

 private:
  ComplexMatrix entries_;
  FockBasis basis_;
  bool hermitian_;
};

void require_same_basis(const TruncatedOperator& a, const TruncatedOperator& b);

/// H = flux2 p^2 + charge2 q^2 + cross (pq + qp).
///
/// Every Hamiltonian and parameter derivative in the library is a member of
/// this three-coefficient family, which lets finite-difference stencils move
/// through coefficient space while the basis stays fixed.
struct QuadraticForm {
  double flux2 = 0.0;
  double charge2 = 0.0;
  double cross = 0.0;

  bool operator==(const QuadraticForm&) const = default;
  auto operator<=>(const QuadraticForm&) const = default;
};

/// Coefficients of the circuit Hamiltonian: 1/(2L), 1/(2C), R/(2L).
QuadraticForm hamiltonian_form(const CircuitParams& params);
/// Coefficients of dH/dL, dH/dC or dH/dR at fixed q and p.
QuadraticForm derivative_form(const CircuitParams& params, Parameter which);
/// Mode frequency 2 sqrt(flux2 * charge2 - cross^2); NaN unless the form is
/// positive definite. For a circuit this is sqrt(1/(LC) - R^2/L^2).
double form_frequency(const QuadraticForm& form);
bool form_positive_definite(const QuadraticForm& form);

/// Exact projections of q^2, p^2 and (pq + qp) onto the truncated basis.
struct QuadraticOperators {
  TruncatedOperator charge2;
  TruncatedOperator flux2;
  TruncatedOperator cross;
};
QuadraticOperators build_quadratic_operators(const FockBasis& basis);

TruncatedOperator assemble(const QuadraticForm& form, const FockBasis& basis);

struct LadderPair {
  TruncatedOperator lower;
  TruncatedOperator raise;
};

/// a has sqrt(n) on the first superdiagonal; a^dagger is its adjoint.
LadderPair build_ladder(std::size_t dim);
LadderPair build_ladder(const FockBasis& basis);

struct Quadratures {
  TruncatedOperator charge;  // q
  TruncatedOperator flux;    // p
};

Quadratures build_quadratures(const CircuitParams& params, std::size_t dim);
Quadratures build_quadratures(const FockBasis& basis);

TruncatedOperator build_hamiltonian(const CircuitParams& params, std::size_t dim);
TruncatedOperator build_hamiltonian(const CircuitParams& params, const FockBasis& basis);

TruncatedOperator build_parameter_derivative(const CircuitParams& params, std::size_t dim,
                                             Parameter which);
TruncatedOperator build_parameter_derivative(const CircuitParams& params, const FockBasis& basis,
                                             Parameter which);

/// AB - BA. The result is never tagged Hermitian.
TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b);

/// Largest |entry| of (a - b) over the leading block of the given size.
double max_block_deviation(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t size);

}  // namespace rlc
