#ifndef OPZERO_ZEROS_HPP
#define OPZERO_ZEROS_HPP

#include <vector>

#include "opzero/families.hpp"
#include "opzero/numeric.hpp"

namespace opzero {

/// Monic polynomial in the sinusoidal coordinate eta, ascending coefficients,
/// coeffs[degree] == 1 exactly.
struct MonicPoly {
  int degree = 0;
  std::vector<cplx> coeffs;

  cplx eval(cplx y) const;
  cplx deriv(cplx y) const;
  double coeff_scale() const;  // max |coefficient|
};

/// The zeros of P_N in eta-space (ascending real part) with their
/// principal-branch lifts to base space.
struct ZeroSet {
  int degree = 0;
  std::vector<cplx> y;
  std::vector<cplx> x;
  double refinement_residual = 0.0;  // max |monic(y_n)|
  // relative accuracy the series evaluator could resolve the zeros to
  // (the final simultaneous-correction step size)
  double zero_error_estimate = 0.0;
  MonicPoly monic;  // monic form of P_N in eta
  cplx leading = 1.0;  // leading coefficient of P_N in eta
};

/// Monic coefficient vector of P_N in eta, from Chebyshev-node interpolation
/// of the family evaluator. Throws NumericalError when the leading
/// coefficient degenerates.
MonicPoly monic_coefficients(const FamilySpec& spec, int N);

/// Zeros of P_N: companion-matrix eigenvalues of the interpolated monic,
/// Newton-polished on the coefficient form and then driven onto the series
/// evaluator by simultaneous Weierstrass corrections. Falls back to
/// interlacing bisection when the coefficient route degenerates.
ZeroSet compute_zeros(const FamilySpec& spec, int N);

/// Per-zero relative residual of the algebraic equation the zeros satisfy,
/// in the balanced form matching the family's operator kind.
std::vector<double> zero_equation_residual(const FamilySpec& spec,
                                           const ZeroSet& zeros);

/// Residuals of the specialized zero identities of the three classical
/// families (sum rules of reciprocal gaps), one value per zero.
std::vector<double> classical_equation_residual(const FamilySpec& spec,
                                                const ZeroSet& zeros);

/// Per-zero relative residual of the inverse-square gap-sum identity
/// (Hermite, Laguerre, Jacobi only).
std::vector<double> inverse_square_sums(const FamilySpec& spec,
                                        const ZeroSet& zeros);

/// Derivative of P_N in eta at y, from the differentiated monic coefficients;
/// multiplied by the leading coefficient when family_normalization is set.
cplx poly_derivative_at(const FamilySpec& spec, int N, cplx y,
                        bool family_normalization = false);

/// Monic coefficient vector (ascending) expanded from a root set.
std::vector<cplx> monic_from_roots(const std::vector<cplx>& roots);

}  // namespace opzero

#endif
