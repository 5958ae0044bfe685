#ifndef OPZERO_PERTURB_HPP
#define OPZERO_PERTURB_HPP

#include <iosfwd>
#include <vector>

#include "opzero/rng.hpp"
#include "opzero/zeros.hpp"

namespace opzero {

/// Distinct evaluation points with their eta-images: either true zeros or
/// random draws for the point-independence experiments.
struct PointSet {
  std::vector<cplx> x;
  std::vector<cplx> y;
  enum class Source { Zeros, Random } source = Source::Zeros;

  int size() const { return static_cast<int>(x.size()); }
};

PointSet points_from_zeros(const ZeroSet& zeros);

/// Random complex points in a disc of radius 2, redrawn on near-collision or
/// pole proximity. Supported for the three differential families.
PointSet random_points(const FamilySpec& spec, int count, Rng& rng);

enum class Provenance { Generic, Explicit };

struct PerturbationMatrix {
  int n = 0;
  std::vector<cplx> entries;  // row-major
  Provenance provenance = Provenance::Generic;

  cplx& at(int r, int c) { return entries[r * n + c]; }
  cplx at(int r, int c) const { return entries[r * n + c]; }
  double max_abs() const;
  double max_imag() const;
};

/// The perturbation matrix from its defining expression: the shifted
/// Hamiltonian applied to the Lagrange numerators and evaluated at the
/// points. Valid for every family and any admissible point set.
PerturbationMatrix build_generic(const FamilySpec& spec, const PointSet& pts,
                                 int N);

/// The group-specific closed form of the matrix, exactly as printed for the
/// family's operator group (including its prefactor conventions).
PerturbationMatrix build_explicit(const FamilySpec& spec, const PointSet& pts,
                                  int N);

/// The eta = x real-shift group admits a shorter closed form valid at true
/// zeros only.
bool has_simplified_form(const FamilySpec& spec);
PerturbationMatrix build_explicit_simplified(const FamilySpec& spec,
                                             const PointSet& pts, int N);

/// Entrywise deviation normalized by the largest entry magnitude.
double max_relative_deviation(const PerturbationMatrix& a,
                              const PerturbationMatrix& b);

/// The earlier inverse-gap-squared matrices for Hermite/Laguerre/Jacobi
/// (row-major, size n*n).
std::vector<cplx> ahmed_matrix(const FamilySpec& spec, const ZeroSet& zeros);

/// Max-norm relative residual between the explicit matrix and its similarity
/// transform of the inverse-gap-squared matrix.
double similarity_residual(const FamilySpec& spec, const ZeroSet& zeros);

/// CSV dump (row, col, re, im) at 17 significant digits.
void write_matrix_csv(std::ostream& os, const PerturbationMatrix& m);

}  // namespace opzero

#endif
