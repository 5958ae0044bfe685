#ifndef OPZERO_SPECTRA_HPP
#define OPZERO_SPECTRA_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "opzero/perturb.hpp"

namespace opzero {

struct EigenPair {
  cplx value;
  std::vector<cplx> vector;  // unit norm, first significant entry real > 0
};

/// Full eigenpair set of the dense nonsymmetric matrix, deterministically
/// ordered by descending real part.
std::vector<EigenPair> eigen_decompose(const PerturbationMatrix& M);

struct SpectrumReport {
  std::vector<double> theoretical;  // E(N)-E(m), m = 0..N-1
  std::vector<cplx> computed;       // matched eigenvalue per m
  std::vector<int> assignment;      // m -> index into the eigenpair list
  std::vector<double> eigenvalue_residuals;
  std::vector<double> collinearity_residuals;
  std::vector<double> reconstruction_residuals;
  bool near_degenerate = false;  // theoretical gaps within 10x the tolerance
  bool eigenvalues_pass = true;
  bool collinearity_pass = true;
  bool reconstruction_pass = true;
};

/// Greedy nearest-neighbour assignment of computed eigenvalues to the
/// theoretical multiset, largest theoretical value first. Residuals are
/// |computed - theoretical| / max(1, |theoretical|); failures are recorded,
/// not thrown.
SpectrumReport match_spectrum(const std::vector<EigenPair>& pairs,
                              const FamilySpec& spec, int N, double tol_eig);

/// The predicted eigenvector P_m(y_n) / (eta_dot(x_n) P_N'(y_n)), with the
/// same normalization convention as eigen_decompose.
std::vector<cplx> corollary_target(const FamilySpec& spec,
                                   const ZeroSet& zeros, int m);

/// Sine of the principal angle between the two vectors; 0 when proportional.
double collinearity_residual(const std::vector<cplx>& v,
                             const std::vector<cplx>& t);

/// Coefficients (ascending in eta, length N) of
/// sum_n eta_dot(x_n) v_n prod_{j != n} (eta - y_j).
std::vector<cplx> reconstruct_polynomial(const FamilySpec& spec,
                                         const ZeroSet& zeros,
                                         const std::vector<cplx>& v);

/// Relative coefficient deviation between the reconstructed combination and
/// the monic form of P_m.
double reconstruction_residual(const FamilySpec& spec, const ZeroSet& zeros,
                               const std::vector<cplx>& v, int m);

/// Exact Lagrange interpolation through the samples, in the barycentric-style
/// product form; returns the sample value when the probe is a node.
cplx lagrange_interpolate(
    const std::vector<std::pair<cplx, cplx>>& samples, cplx probe);

struct DiophantineReport {
  std::vector<double> spectrum;
  int trials = 0;
  int discarded = 0;  // point sets whose eigenproblem was not resolvable
  double max_residual = 0.0;
  bool pass = true;
};

/// Random point sets for the differential families: the matched eigenvalue
/// multiset of the explicit matrix must not depend on the points.
DiophantineReport diophantine_experiment(const FamilySpec& spec, int N,
                                         int trials, std::uint64_t seed,
                                         double tol = 1e-8);

}  // namespace opzero

#endif
