#include "opzero/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace opzero {

namespace {

// Eigenvalues in extended precision. Random complex point sets occasionally
// produce nearly defective matrices whose eigenvalue condition numbers
// exceed what double-precision QR can resolve at the 1e-8 scale; the
// point-independence experiment therefore solves in long double.
std::vector<cplx> eigenvalues_extended(const PerturbationMatrix& M) {
  using LMat = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic,
                             Eigen::Dynamic>;
  const int n = M.n;
  LMat A(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      A(r, c) = std::complex<long double>(M.at(r, c).real(),
                                          M.at(r, c).imag());
  Eigen::ComplexEigenSolver<LMat> solver;
  solver.setMaxIterations(100 * n);
  solver.compute(A, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalue iteration did not converge");
  std::vector<cplx> values(n);
  for (int i = 0; i < n; ++i)
    values[i] = cplx(static_cast<double>(solver.eigenvalues()(i).real()),
                     static_cast<double>(solver.eigenvalues()(i).imag()));
  return values;
}

void normalize_phase(std::vector<cplx>& v) {
  double norm = 0.0, top = 0.0;
  for (cplx c : v) {
    norm += std::norm(c);
    top = std::max(top, std::abs(c));
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) throw DomainError("cannot normalize a zero vector");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-8 * top) {
      cplx phase = std::conj(v[i]) / std::abs(v[i]);
      for (cplx& c : v) c *= phase / norm;
      return;
    }
  }
  for (cplx& c : v) c /= norm;
}

}  // namespace

std::vector<EigenPair> eigen_decompose(const PerturbationMatrix& M) {
  const int n = M.n;
  for (cplx v : M.entries)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalError("matrix has non-finite entries");
  Eigen::MatrixXcd A(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) A(r, c) = M.at(r, c);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.setMaxIterations(100 * n);
  solver.compute(A, true);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalue iteration did not converge");
  std::vector<EigenPair> pairs(n);
  for (int k = 0; k < n; ++k) {
    pairs[k].value = solver.eigenvalues()(k);
    pairs[k].vector.resize(n);
    for (int i = 0; i < n; ++i) pairs[k].vector[i] = solver.eigenvectors()(i, k);
    normalize_phase(pairs[k].vector);
  }
  std::sort(pairs.begin(), pairs.end(), [](const EigenPair& a,
                                           const EigenPair& b) {
    if (a.value.real() != b.value.real())
      return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
  });
  return pairs;
}

SpectrumReport match_spectrum(const std::vector<EigenPair>& pairs,
                              const FamilySpec& spec, int N, double tol_eig) {
  SpectrumReport rep;
  const double EN = spec.energy(N);
  for (int m = 0; m < N; ++m) rep.theoretical.push_back(EN - spec.energy(m));

  double top = 1.0, gap = std::numeric_limits<double>::infinity();
  for (double t : rep.theoretical) top = std::max(top, std::abs(t));
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      gap = std::min(gap, std::abs(rep.theoretical[i] - rep.theoretical[j]));
  rep.near_degenerate = N > 1 && gap < 10.0 * tol_eig * top;

  std::vector<bool> used(pairs.size(), false);
  for (int m = 0; m < N; ++m) {  // theoretical values already descend with m
    double target = rep.theoretical[m];
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (used[k]) continue;
      double d = std::abs(pairs[k].value - target);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    used[best] = true;
    rep.assignment.push_back(best);
    rep.computed.push_back(pairs[best].value);
    double resid = best_d / std::max(1.0, std::abs(target));
    rep.eigenvalue_residuals.push_back(resid);
    if (resid > tol_eig) rep.eigenvalues_pass = false;
  }
  return rep;
}

std::vector<cplx> corollary_target(const FamilySpec& spec,
                                   const ZeroSet& zeros, int m) {
  const int N = zeros.degree;
  if (m < 0 || m >= N)
    throw DomainError(spec.name + ": target degree must lie in 0..N-1");
  std::vector<cplx> t(N);
  for (int n = 0; n < N; ++n) {
    cplx ed = spec.eta_dot(zeros.x[n]);
    if (std::abs(ed) < 1e-300)
      throw NumericalError(spec.name +
                           ": eta_dot vanishes at a zero (degenerate)");
    // derivative of the monic product at its own root
    cplx dprod = gap_product(zeros.y[n], zeros.y, n);
    t[n] = spec.poly(m, zeros.x[n]) / (ed * dprod);
  }
  normalize_phase(t);
  return t;
}

double collinearity_residual(const std::vector<cplx>& v,
                             const std::vector<cplx>& t) {
  if (v.size() != t.size() || v.empty())
    throw DomainError("collinearity requires equal-length nonzero vectors");
  double nv = 0.0, nt = 0.0;
  cplx dot = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    nv += std::norm(v[i]);
    nt += std::norm(t[i]);
    dot += std::conj(v[i]) * t[i];
  }
  if (nv == 0.0 || nt == 0.0)
    throw DomainError("collinearity of a zero vector is undefined");
  // the sine of the principal angle, via the orthogonal remainder of v
  // against t (free of the sqrt(1-cos^2) cancellation floor)
  cplx proj = std::conj(dot) / nt;
  double rem = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    rem += std::norm(v[i] - proj * t[i]);
  return std::sqrt(std::max(0.0, rem / nv));
}

std::vector<cplx> reconstruct_polynomial(const FamilySpec& spec,
                                         const ZeroSet& zeros,
                                         const std::vector<cplx>& v) {
  const int N = zeros.degree;
  if (static_cast<int>(v.size()) != N)
    throw DomainError(spec.name + ": eigenvector length must equal N");
  std::vector<cplx> acc(N, cplx(0.0));
  double abs_scale = 0.0;
  for (int n = 0; n < N; ++n) {
    // coefficients of prod_{j != n} (eta - y_j), ascending
    std::vector<cplx> c{1.0};
    for (int j = 0; j < N; ++j) {
      if (j == n) continue;
      c.push_back(0.0);
      for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k)
        c[k] -= zeros.y[j] * c[k - 1];
    }
    std::reverse(c.begin(), c.end());
    cplx w = spec.eta_dot(zeros.x[n]) * v[n];
    for (int k = 0; k < N; ++k) {
      acc[k] += w * c[k];
      abs_scale = std::max(abs_scale, std::abs(w * c[k]));
    }
  }
  double top = 0.0;
  for (cplx c : acc) top = std::max(top, std::abs(c));
  if (top < 1e-12 * std::max(1.0, abs_scale))
    throw NumericalError(spec.name +
                         ": reconstruction produced the null combination");
  return acc;
}

double reconstruction_residual(const FamilySpec& spec, const ZeroSet& zeros,
                               const std::vector<cplx>& v, int m) {
  const int N = zeros.degree;
  std::vector<cplx> rec = reconstruct_polynomial(spec, zeros, v);
  std::vector<cplx> ref(N, cplx(0.0));
  if (m == 0) {
    ref[0] = 1.0;
  } else {
    // reference coefficients expanded from the zeros of P_m; the root
    // product carries none of the interpolation conditioning
    ZeroSet zm = compute_zeros(spec, m);
    std::vector<cplx> c = monic_from_roots(zm.y);
    for (int k = 0; k <= m; ++k) ref[k] = c[k];
  }
  if (std::abs(rec[m]) < 1e-300) return 1.0;  // wrong degree entirely
  cplx scale = rec[m];
  double ref_top = 0.0;
  for (cplx c : ref) ref_top = std::max(ref_top, std::abs(c));
  double dev = 0.0;
  for (int k = 0; k < N; ++k)
    dev = std::max(dev, std::abs(rec[k] / scale - ref[k]));
  return dev / ref_top;
}

cplx lagrange_interpolate(const std::vector<std::pair<cplx, cplx>>& samples,
                          cplx probe) {
  const int n = static_cast<int>(samples.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (samples[i].first == samples[j].first)
        throw DomainError("interpolation nodes must be distinct");
  for (const auto& [node, value] : samples)
    if (std::abs(probe - node) <= 1e-14 * (1.0 + std::abs(node))) return value;
  cplx total = 0.0;
  for (int i = 0; i < n; ++i) {
    cplx dnum = 1.0, dden = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dnum *= probe - samples[j].first;
      dden *= samples[i].first - samples[j].first;
    }
    total += samples[i].second * dnum / dden;
  }
  return total;
}

DiophantineReport diophantine_experiment(const FamilySpec& spec, int N,
                                         int trials, std::uint64_t seed,
                                         double tol) {
  if (!spec.is_classical())
    throw DomainError(spec.name +
                      ": the point-independence experiment covers the "
                      "differential families only");
  if (N < 1 || N > 10)
    throw DomainError(
        "point-independence experiments cover degrees 1..10");
  DiophantineReport rep;
  rep.trials = trials;
  const double EN = spec.energy(N);
  for (int m = 0; m < N; ++m) rep.spectrum.push_back(EN - spec.energy(m));
  Rng rng(seed);
  int done = 0;
  while (done < trials && rep.discarded < 40 * trials) {
    PointSet pts = random_points(spec, N, rng);
    PerturbationMatrix M = build_explicit(spec, pts, N);
    std::vector<cplx> ext = eigenvalues_extended(M);
    // resolvability: the double and extended eigensolves of this matrix
    // must agree, or the point set's eigenvector conditioning exceeds what
    // the experiment can measure (the theoretical spectrum plays no role)
    std::vector<EigenPair> dbl = eigen_decompose(M);
    double disagree = 0.0;
    std::vector<bool> used(ext.size(), false);
    for (const EigenPair& p : dbl) {
      int best = -1;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ext.size(); ++k) {
        if (used[k]) continue;
        double d = std::abs(ext[k] - p.value);
        if (d < bd) {
          bd = d;
          best = static_cast<int>(k);
        }
      }
      used[best] = true;
      disagree = std::max(disagree, bd / std::max(1.0, std::abs(p.value)));
    }
    if (disagree > 0.05 * tol) {
      ++rep.discarded;
      continue;
    }
    std::vector<EigenPair> pairs;
    for (cplx v : ext) pairs.push_back({v, {}});
    SpectrumReport match = match_spectrum(pairs, spec, N, tol);
    for (double r : match.eigenvalue_residuals)
      rep.max_residual = std::max(rep.max_residual, r);
    ++done;
  }
  if (done < trials)
    throw NumericalError(spec.name +
                         ": random point sets were persistently unresolvable");
  rep.pass = rep.max_residual <= tol;
  return rep;
}

}  // namespace opzero
