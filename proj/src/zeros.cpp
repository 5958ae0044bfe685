#include "opzero/zeros.hpp"

#include "opzero/hyper.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace opzero {

namespace {

using lcplx = std::complex<long double>;

cplx horner(const std::vector<cplx>& coeffs, cplx y) {
  cplx v = 0.0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    v = v * y + coeffs[k];
  return v;
}

struct Interpolation {
  std::vector<cplx> monic;  // ascending, normalized by the leading coefficient
  cplx leading;             // leading coefficient before normalization
};

// Newton divided differences on the given nodes, expanded to monomial form.
// Extended precision internally: the expansion is the conditioning
// bottleneck once the series values carry long-double accuracy.
std::vector<cplx> fit_monomial(const std::vector<double>& nodes,
                               const std::vector<cplx>& values) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<lcplx> dd(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    dd[i] = lcplx(values[i].real(), values[i].imag());
  for (int j = 1; j <= n; ++j)
    for (int i = n; i >= j; --i)
      dd[i] = (dd[i] - dd[i - 1]) /
              static_cast<long double>(nodes[i] - nodes[i - j]);
  std::vector<lcplx> poly{dd[n]};
  for (int k = n - 1; k >= 0; --k) {
    poly.insert(poly.begin(), 0.0L);
    for (std::size_t i = 0; i + 1 < poly.size(); ++i)
      poly[i] -= static_cast<long double>(nodes[k]) * poly[i + 1];
    poly[0] += dd[k];
  }
  std::vector<cplx> out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i)
    out[i] = cplx(static_cast<double>(poly[i].real()),
                  static_cast<double>(poly[i].imag()));
  return out;
}

Interpolation interpolate_monic(const FamilySpec& spec, int N, double lo,
                                double hi) {
  std::vector<double> nodes(N + 1);
  std::vector<cplx> values(N + 1);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int k = 0; k <= N; ++k) {
    double t = std::cos((2.0 * k + 1.0) * M_PI / (2.0 * (N + 1)));
    nodes[k] = mid + half * t;
    values[k] = spec.poly(N, spec.eta_inverse(nodes[k]));
  }
  std::vector<cplx> coeffs = fit_monomial(nodes, values);
  double scale = 0.0;
  for (cplx c : coeffs) scale = std::max(scale, std::abs(c));
  cplx leading = coeffs[N];
  if (std::abs(leading) < 1e-12 * scale)
    throw NumericalError(spec.name +
                         ": degenerate leading coefficient at degree " +
                         std::to_string(N));
  for (cplx& c : coeffs) c /= leading;
  coeffs[N] = 1.0;
  return {std::move(coeffs), leading};
}

std::vector<cplx> companion_roots(const std::vector<cplx>& monic) {
  const int n = static_cast<int>(monic.size()) - 1;
  if (n == 1) return {-monic[0]};
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -monic[i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(C, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("companion-matrix eigenvalue iteration failed");
  std::vector<cplx> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()(i);
  return roots;
}

void newton_polish(const std::vector<cplx>& monic, std::vector<cplx>& roots) {
  std::vector<cplx> dcoeffs(monic.size() - 1);
  for (std::size_t k = 1; k < monic.size(); ++k)
    dcoeffs[k - 1] = static_cast<double>(k) * monic[k];
  for (cplx& r : roots) {
    cplx best = r;
    double best_val = std::abs(horner(monic, r));
    for (int step = 0; step < 10; ++step) {
      cplx d = horner(dcoeffs, best);
      if (std::abs(d) < 1e-300) break;
      cplx cand = best - horner(monic, best) / d;
      double val = std::abs(horner(monic, cand));
      if (val >= best_val) break;
      best = cand;
      best_val = val;
    }
    r = best;
  }
}

// Simultaneous Weierstrass corrections against the family evaluator: the
// correction denominator is the derivative of prod (y - y_j) at the current
// root estimates, so no coefficient form enters. Drives the companion roots
// onto the zeros of the series itself.
double weierstrass_polish(const FamilySpec& spec, int N, cplx leading,
                          std::vector<cplx>& roots) {
  const int n = static_cast<int>(roots.size());
  double last_worst = 0.0;
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<cplx> next = roots;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx f;
      try {
        f = spec.poly(N, spec.eta_inverse(roots[i])) / leading;
      } catch (const DomainError&) {
        continue;
      }
      cplx den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= roots[i] - roots[j];
      if (std::abs(den) < 1e-300) continue;
      cplx step = f / den;
      if (std::abs(step) > 0.1 * (1.0 + std::abs(roots[i]))) continue;
      next[i] = roots[i] - step;
      worst = std::max(worst, std::abs(step) / (1.0 + std::abs(roots[i])));
    }
    roots = next;
    last_worst = worst;
    if (worst < 1e-16) break;
  }
  return last_worst;
}

// How strongly last-place rounding of the evaluation inputs moves the
// computed zeros. Series terms orders of magnitude above the polynomial's
// value couple ulp noise of the double-precision series inputs into the
// value; the bias is invisible to the correction steps (the iteration
// converges onto the zeros of the perturbed function), so the cancellation
// ratio is read off the evaluator directly at mid-gap probes.
double evaluation_noise(const FamilySpec& spec, int N, cplx /*leading*/,
                        const std::vector<cplx>& roots) {
  const int n = static_cast<int>(roots.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double gap = 1.0 + std::abs(roots[i]);
    for (int j = 0; j < n; ++j)
      if (j != i) gap = std::min(gap, std::abs(roots[i] - roots[j]));
    try {
      cplx ym = roots[i] + 0.5 * gap;
      hyper::reset_cancellation();
      (void)spec.poly(N, spec.eta_inverse(ym));
      double cancel = hyper::last_cancellation();
      // zero shift ~ eps * max_term / |f'| with |f'| ~ |f(ym)| / (gap/2)
      double err = 2.2e-16 * cancel * 0.5 * gap / (1.0 + std::abs(roots[i]));
      worst = std::max(worst, err);
    } catch (const DomainError&) {
      continue;
    }
  }
  return worst;
}

std::vector<cplx> coeffs_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};  // descending while multiplying factors in
  for (cplx r : roots) {
    c.push_back(0.0);
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k)
      c[k] -= r * c[k - 1];
  }
  std::reverse(c.begin(), c.end());
  return c;
}

double min_gap(const std::vector<cplx>& y) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j)
      g = std::min(g, std::abs(y[i] - y[j]));
  return g;
}

double span(const std::vector<cplx>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j)
      s = std::max(s, std::abs(y[i] - y[j]));
  return s;
}

// Real-shift lattices carry at most one zero between consecutive lattice
// points, so the zeros are exhausted once P_N has alternated sign N times
// along a shifted integer grid. Returns the eta-image interval of the last
// sign change plus one lattice step.
std::pair<double, double> scan_bracket(const FamilySpec& spec, int N) {
  // one zero at most per unit lattice interval, so P_N alternates sign at
  // consecutive integers exactly once per zero
  const int limit = spec.lattice_size >= 0 ? spec.lattice_size : 4000;
  double prev = spec.poly(N, cplx(0.0)).real();
  int changes = 0;
  for (int k = 1; k <= limit; ++k) {
    double v = spec.poly(N, cplx(double(k))).real();
    if (prev == 0.0 || v * prev < 0.0) {
      ++changes;
      if (changes == N) {
        double top = std::min<double>(k + 1.0, limit);
        return {0.0, spec.eta(cplx(top)).real()};
      }
    }
    prev = v;
  }
  if (spec.lattice_size >= 0)  // every zero lies below eta(N) regardless
    return {0.0, spec.eta(cplx(double(spec.lattice_size))).real()};
  throw NumericalError(spec.name + ": could not bracket the zeros of degree " +
                       std::to_string(N));
}

std::pair<double, double> initial_bracket(const FamilySpec& spec, int N) {
  if (spec.op_kind == OperatorKind::RealShift) return scan_bracket(spec, N);
  return spec.bracket_fn(N);
}

// Interlacing continuation: grows the zero set degree by degree, bisecting
// the family evaluator between consecutive zeros of the previous degree.
// Slow but free of coefficient conditioning; used when the companion route
// degenerates.
std::vector<cplx> bisection_roots(const FamilySpec& spec, int N, double lo,
                                  double hi) {
  auto g = [&](int k, double y) {
    return spec.poly(k, spec.eta_inverse(cplx(y))).real();
  };
  std::vector<double> prev;
  for (int k = 1; k <= N; ++k) {
    std::vector<double> ends;
    ends.push_back(lo);
    for (double r : prev) ends.push_back(r);
    ends.push_back(hi);
    std::vector<double> roots;
    for (std::size_t b = 0; b + 1 < ends.size(); ++b) {
      double a = ends[b], c = ends[b + 1];
      double fa = g(k, a), fc = g(k, c);
      if (fa * fc > 0.0) {
        // scan for the sign change the interlacing guarantees
        bool found = false;
        for (int s = 1; s <= 64 && !found; ++s) {
          double m = a + (c - a) * s / 65.0;
          double fm = g(k, m);
          if (fa * fm <= 0.0) {
            c = m;
            fc = fm;
            found = true;
          }
        }
        if (!found)
          throw NumericalError(spec.name +
                               ": lost a zero bracket during continuation");
      }
      for (int it = 0; it < 200 && c - a > 1e-16 * (1.0 + std::abs(c)); ++it) {
        double m = 0.5 * (a + c);
        double fm = g(k, m);
        if (fa * fm <= 0.0) {
          c = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + c));
    }
    prev = std::move(roots);
  }
  std::vector<cplx> out(prev.begin(), prev.end());
  return out;
}

void sort_points(std::vector<cplx>& y) {
  std::sort(y.begin(), y.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

struct Resolved {
  Interpolation ip;
  std::vector<cplx> roots;
  double zero_error = 0.0;  // last simultaneous-correction step, relative
  bool via_bisection = false;
};

bool roots_acceptable(const std::vector<cplx>& roots,
                      const std::vector<cplx>& monic, int N) {
  if (static_cast<int>(roots.size()) != N) return false;
  for (cplx v : roots)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  if (N > 1 && min_gap(roots) <= 1e-10 * span(roots)) return false;
  double scale = 0.0;
  for (cplx c : monic) scale = std::max(scale, std::abs(c));
  for (cplx v : roots)
    if (std::abs(horner(monic, v)) > 1e-9 * scale) return false;
  return true;
}

cplx estimate_leading(const FamilySpec& spec, int N,
                      const std::vector<cplx>& roots, double lo, double hi) {
  // value over root product at a probe clear of the zeros; imaginary offset
  // keeps the probe inside every coordinate branch
  cplx probe(0.5 * (lo + hi), hi - lo + 1.0);
  cplx denom = 1.0;
  for (cplx r : roots) denom *= probe - r;
  return spec.poly(N, spec.eta_inverse(probe)) / denom;
}

// Companion route with occupancy-refined brackets; interlacing bisection as
// the fallback when it degenerates.
Resolved resolve_roots(const FamilySpec& spec, int N) {
  auto [lo0, hi0] = initial_bracket(spec, N);

  double lo = lo0, hi = hi0;
  bool shrunk = false;
  for (int pass = 0; pass < 4; ++pass) {
    Interpolation ip;
    std::vector<cplx> roots;
    try {
      ip = interpolate_monic(spec, N, lo, hi);
      roots = companion_roots(ip.monic);
    } catch (const Error&) {
      if (!shrunk) break;  // the initial bracket is hopeless
      lo = lo0;            // retreat from an over-shrunk bracket
      hi = hi0;
      shrunk = false;
      continue;
    }
    double top = lo;
    bool sane = true;
    for (cplx r : roots) {
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) sane = false;
      top = std::max(top, r.real());
    }
    if (!spec.bracket_exact && sane && top > lo && top <= hi && pass < 3) {
      double occupancy = (top - lo) / (hi - lo);
      if (occupancy < 0.55) {
        hi = lo + (top - lo) * 1.15 + 1e-12;
        shrunk = true;
        continue;
      }
    }
    newton_polish(ip.monic, roots);
    double err = weierstrass_polish(spec, N, ip.leading, roots);
    if (roots_acceptable(roots, ip.monic, N)) {
      err = std::max(err, evaluation_noise(spec, N, ip.leading, roots));
      return {std::move(ip), std::move(roots), err, false};
    }
    break;
  }

  // bisection fallback on the initial bracket
  std::vector<cplx> roots = bisection_roots(spec, N, lo0, hi0);
  cplx leading = estimate_leading(spec, N, roots, lo0, hi0);
  double err = weierstrass_polish(spec, N, leading, roots);
  err = std::max(err, evaluation_noise(spec, N, leading, roots));
  Interpolation ip;
  ip.monic = coeffs_from_roots(roots);
  ip.leading = leading;
  if (!roots_acceptable(roots, ip.monic, N))
    throw NumericalError(spec.name + ": zeros of degree " + std::to_string(N) +
                         " could not be resolved (degenerate roots)");
  return {std::move(ip), std::move(roots), err, true};
}

}  // namespace

cplx MonicPoly::eval(cplx y) const { return horner(coeffs, y); }

cplx MonicPoly::deriv(cplx y) const {
  cplx v = 0.0;
  for (int k = degree; k >= 1; --k)
    v = v * y + static_cast<double>(k) * coeffs[k];
  return v;
}

double MonicPoly::coeff_scale() const {
  double s = 0.0;
  for (cplx c : coeffs) s = std::max(s, std::abs(c));
  return s;
}

static void check_degree(const FamilySpec& spec, int N) {
  if (N < 1 || N > spec.max_degree)
    throw DomainError(spec.name + ": degree " + std::to_string(N) +
                      " outside 1.." + std::to_string(spec.max_degree));
}

MonicPoly monic_coefficients(const FamilySpec& spec, int N) {
  check_degree(spec, N);
  Resolved r = resolve_roots(spec, N);
  MonicPoly p;
  p.degree = N;
  p.coeffs = std::move(r.ip.monic);
  return p;
}

ZeroSet compute_zeros(const FamilySpec& spec, int N) {
  check_degree(spec, N);
  Resolved r = resolve_roots(spec, N);
  sort_points(r.roots);

  ZeroSet z;
  z.degree = N;
  z.y = std::move(r.roots);
  z.zero_error_estimate = r.zero_error;
  z.monic.degree = N;
  z.monic.coeffs = std::move(r.ip.monic);
  z.leading = r.ip.leading;
  z.x.reserve(N);
  double resid = 0.0;
  for (cplx y : z.y) {
    cplx x = spec.eta_inverse(y);
    cplx back = spec.eta(x);
    if (std::abs(back - y) > 1e-10 * (1.0 + std::abs(y)))
      throw NumericalError(spec.name + ": branch lift failed for a zero");
    z.x.push_back(x);
    resid = std::max(resid, std::abs(z.monic.eval(y)));
  }
  z.refinement_residual = resid;
  return z;
}

std::vector<double> zero_equation_residual(const FamilySpec& spec,
                                           const ZeroSet& zeros) {
  const int N = zeros.degree;
  // long double intermediates keep the evaluation rounding below the
  // sensitivity of the identity to the zeros themselves
  auto lprod = [&](cplx base, const std::vector<cplx>& y) {
    lcplx p = 1.0L;
    lcplx b(base.real(), base.imag());
    for (cplx v : y) p *= b - lcplx(v.real(), v.imag());
    return p;
  };
  std::vector<double> res(N);
  for (int n = 0; n < N; ++n) {
    cplx xn = zeros.x[n];
    lcplx lhs, rhs;
    long double scale = 0.0L;
    switch (spec.op_kind) {
      case OperatorKind::Differential: {
        lcplx s = 0.0L;
        long double sabs = 0.0L;
        for (int j = 0; j < N; ++j) {
          if (j == n) continue;
          lcplx d = lcplx(zeros.y[n].real(), zeros.y[n].imag()) -
                    lcplx(zeros.y[j].real(), zeros.y[j].imag());
          s += 1.0L / d;
          sabs += 1.0L / std::abs(d);
        }
        cplx ed = spec.eta_dot(xn);
        cplx edd = spec.eta_ddot(xn);
        cplx dr = spec.drift_fn(xn) * ed;
        lcplx led(ed.real(), ed.imag());
        lhs = lcplx(edd.real(), edd.imag()) + 2.0L * led * led * s;
        rhs = lcplx(dr.real(), dr.imag());
        scale = std::abs(lcplx(edd.real(), edd.imag())) +
                2.0L * std::norm(led) * sabs + std::abs(rhs);
        break;
      }
      case OperatorKind::ImaginaryShift: {
        cplx up = spec.eta(xn - cplx(0.0, spec.shift_scale));
        cplx dn = spec.eta(xn + cplx(0.0, spec.shift_scale));
        cplx V = spec.forward_fn(xn), W = spec.backward_fn(xn);
        lhs = lcplx(V.real(), V.imag()) * lprod(up, zeros.y);
        rhs = -lcplx(W.real(), W.imag()) * lprod(dn, zeros.y);
        scale = std::max(std::abs(lhs), std::abs(rhs));
        break;
      }
      case OperatorKind::RealShift: {
        cplx up = spec.eta(xn + 1.0);
        cplx dn = spec.eta(xn - 1.0);
        cplx B = spec.forward_fn(xn), D = spec.backward_fn(xn);
        lhs = lcplx(B.real(), B.imag()) * lprod(up, zeros.y);
        rhs = -lcplx(D.real(), D.imag()) * lprod(dn, zeros.y);
        scale = std::max(std::abs(lhs), std::abs(rhs));
        break;
      }
    }
    res[n] =
        scale == 0.0L ? 0.0 : static_cast<double>(std::abs(lhs - rhs) / scale);
  }
  return res;
}

std::vector<double> classical_equation_residual(const FamilySpec& spec,
                                                const ZeroSet& zeros) {
  if (!spec.is_classical())
    throw DomainError(spec.name + ": classical zero identities apply to the "
                                  "differential families only");
  const int N = zeros.degree;
  std::vector<double> res(N);
  for (int n = 0; n < N; ++n) {
    cplx yn = zeros.y[n];
    cplx s = 0.0;
    double sabs = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == n) continue;
      s += 1.0 / (yn - zeros.y[j]);
      sabs += 1.0 / std::abs(yn - zeros.y[j]);
    }
    cplx lhs, rhs;
    double scale;
    if (spec.eta_kind == EtaKind::X) {  // Hermite
      lhs = s;
      rhs = yn;
      scale = sabs + std::abs(rhs);
    } else if (spec.eta_kind == EtaKind::XSquared) {  // Laguerre
      double alpha = spec.params.values.at("g").real() - 0.5;
      lhs = yn * s;
      rhs = 0.5 * (yn - (alpha + 1.0));
      scale = std::abs(yn) * sabs + std::abs(rhs);
    } else {  // Jacobi
      double alpha = spec.params.values.at("g").real() - 0.5;
      double beta = spec.params.values.at("h").real() - 0.5;
      lhs = (1.0 - yn * yn) * s;
      rhs = 0.5 * ((alpha + beta + 2.0) * yn + (alpha - beta));
      scale = std::abs(1.0 - yn * yn) * sabs + std::abs(rhs);
    }
    res[n] = scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  }
  return res;
}

std::vector<double> inverse_square_sums(const FamilySpec& spec,
                                        const ZeroSet& zeros) {
  if (!spec.is_classical())
    throw DomainError(spec.name +
                      ": inverse-square sums apply to the differential "
                      "families only");
  const int N = zeros.degree;
  std::vector<double> res(N);
  for (int n = 0; n < N; ++n) {
    cplx yn = zeros.y[n];
    cplx s2 = 0.0;
    double s2abs = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == n) continue;
      cplx d = yn - zeros.y[j];
      s2 += 1.0 / (d * d);
      s2abs += 1.0 / std::norm(d);
    }
    cplx lhs, rhs;
    double wabs;
    if (spec.eta_kind == EtaKind::X) {
      lhs = s2;
      rhs = 2.0 / 3.0 * (N - 1.0) - yn * yn / 3.0;
      wabs = s2abs;
    } else if (spec.eta_kind == EtaKind::XSquared) {
      double alpha = spec.params.values.at("g").real() - 0.5;
      lhs = yn * yn * s2;
      rhs = -((alpha + 1.0) * (alpha + 5.0) -
              2.0 * (2.0 * N + alpha + 1.0) * yn + yn * yn) /
            12.0;
      wabs = std::norm(yn) * s2abs;
    } else {
      double alpha = spec.params.values.at("g").real() - 0.5;
      double beta = spec.params.values.at("h").real() - 0.5;
      cplx w = 1.0 - yn * yn;
      lhs = w * w * s2;
      double ab = alpha + beta;
      rhs = (N - 1.0) * (N + ab + 2.0) / 3.0 -
            (alpha - beta) * (alpha - beta) / 12.0 -
            (alpha - beta) * (ab + 6.0) / 6.0 * yn -
            (4.0 * N * (N + ab + 1.0) + (ab + 2.0) * (ab + 6.0)) / 12.0 * yn *
                yn;
      wabs = std::norm(w) * s2abs;
    }
    double scale = wabs + std::abs(rhs);
    res[n] = scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  }
  return res;
}

std::vector<cplx> monic_from_roots(const std::vector<cplx>& roots) {
  return coeffs_from_roots(roots);
}

cplx poly_derivative_at(const FamilySpec& spec, int N, cplx y,
                        bool family_normalization) {
  check_degree(spec, N);
  Resolved r = resolve_roots(spec, N);
  MonicPoly p;
  p.degree = N;
  p.coeffs = std::move(r.ip.monic);
  cplx d = p.deriv(y);
  return family_normalization ? d * r.ip.leading : d;
}

}  // namespace opzero
