#include "opzero/perturb.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace opzero {

namespace {

constexpr cplx kI{0.0, 1.0};

double param(const FamilySpec& spec, const char* name) {
  return spec.params.values.at(name).real();
}

// sum over k != m of prod_{j != m,k} (y_n - y_j)
cplx lagrange_sum1(const std::vector<cplx>& y, cplx yn, int m) {
  const int N = static_cast<int>(y.size());
  cplx s = 0.0;
  for (int k = 0; k < N; ++k) {
    if (k == m) continue;
    s += gap_product(yn, y, m, k);
  }
  return s;
}

// sum over ordered pairs k != l (both != m) of prod_{j != m,k,l} (y_n - y_j)
cplx lagrange_sum2(const std::vector<cplx>& y, cplx yn, int m) {
  const int N = static_cast<int>(y.size());
  cplx s = 0.0;
  for (int k = 0; k < N; ++k) {
    if (k == m) continue;
    for (int l = 0; l < N; ++l) {
      if (l == m || l == k) continue;
      cplx p = 1.0;
      for (int j = 0; j < N; ++j) {
        if (j == m || j == k || j == l) continue;
        p *= yn - y[j];
      }
      s += p;
    }
  }
  return s;
}

PerturbationMatrix alloc(int n, Provenance prov) {
  PerturbationMatrix m;
  m.n = n;
  m.entries.assign(static_cast<std::size_t>(n) * n, cplx(0.0));
  m.provenance = prov;
  return m;
}

void require_points(const FamilySpec& spec, const PointSet& pts, int N) {
  if (pts.size() != N)
    throw DomainError(spec.name + ": point set size does not match degree");
}

}  // namespace

double PerturbationMatrix::max_abs() const {
  double s = 0.0;
  for (cplx v : entries) s = std::max(s, std::abs(v));
  return s;
}

double PerturbationMatrix::max_imag() const {
  double s = 0.0;
  for (cplx v : entries) s = std::max(s, std::abs(v.imag()));
  return s;
}

PointSet points_from_zeros(const ZeroSet& zeros) {
  PointSet p;
  p.x = zeros.x;
  p.y = zeros.y;
  p.source = PointSet::Source::Zeros;
  return p;
}

PointSet random_points(const FamilySpec& spec, int count, Rng& rng) {
  if (!spec.is_classical())
    throw DomainError(spec.name +
                      ": random point sets are drawn for the differential "
                      "families only");
  // separation floor: matrix entries grow like 1/gap^2, so the matched
  // spectrum keeps <= 1e-8 accuracy in doubles only with gaps well above
  // the rounding scale
  const double kGap = 2e-2;
  PointSet p;
  p.source = PointSet::Source::Random;
  int guard = 0;
  while (p.size() < count) {
    if (++guard > 100000)
      throw NumericalError("random point drawing failed to satisfy the "
                           "separation constraints");
    cplx x(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    if (std::abs(x) > 2.0) continue;
    if (spec.eta_kind == EtaKind::XSquared && std::abs(x) < kGap) continue;
    if (spec.eta_kind == EtaKind::Cos2X &&
        std::abs(std::sin(2.0 * x)) < kGap)
      continue;
    cplx y = spec.eta(x);
    bool ok = true;
    for (int j = 0; j < p.size() && ok; ++j) {
      if (std::abs(x - p.x[j]) < kGap) ok = false;
      if (std::abs(y - p.y[j]) < kGap) ok = false;
    }
    if (!ok) continue;
    p.x.push_back(x);
    p.y.push_back(y);
  }
  return p;
}

PerturbationMatrix build_generic(const FamilySpec& spec, const PointSet& pts,
                                 int N) {
  require_points(spec, pts, N);
  const double EN = spec.energy(N);
  PerturbationMatrix M = alloc(N, Provenance::Generic);
  for (int n = 0; n < N; ++n) {
    const cplx xn = pts.x[n];
    const cplx denom = spec.eta_dot(xn) * gap_product(pts.y[n], pts.y, n);
    for (int m = 0; m < N; ++m) {
      cplx pm_at_n = gap_product(pts.y[n], pts.y, m);  // 0 unless m == n
      cplx hp;
      switch (spec.op_kind) {
        case OperatorKind::Differential: {
          cplx s1 = lagrange_sum1(pts.y, pts.y[n], m);
          cplx s2 = lagrange_sum2(pts.y, pts.y[n], m);
          cplx ed = spec.eta_dot(xn);
          hp = -(spec.eta_ddot(xn) * s1 + ed * ed * s2) +
               spec.drift_fn(xn) * ed * s1 - EN * pm_at_n;
          break;
        }
        case OperatorKind::ImaginaryShift: {
          cplx shift = cplx(0.0, spec.shift_scale);
          cplx up = gap_product(spec.eta(xn - shift), pts.y, m);
          cplx dn = gap_product(spec.eta(xn + shift), pts.y, m);
          hp = spec.forward_fn(xn) * (up - pm_at_n) +
               spec.backward_fn(xn) * (dn - pm_at_n) - EN * pm_at_n;
          break;
        }
        case OperatorKind::RealShift: {
          cplx up = gap_product(spec.eta(xn + 1.0), pts.y, m);
          cplx dn = gap_product(spec.eta(xn - 1.0), pts.y, m);
          hp = spec.forward_fn(xn) * (pm_at_n - up) +
               spec.backward_fn(xn) * (pm_at_n - dn) - EN * pm_at_n;
          break;
        }
      }
      M.at(n, m) = -spec.eta_dot(pts.x[m]) * hp / denom;
    }
  }
  return M;
}

PerturbationMatrix build_explicit(const FamilySpec& spec, const PointSet& pts,
                                  int N) {
  require_points(spec, pts, N);
  const double EN = spec.energy(N);
  const auto& y = pts.y;
  const auto& x = pts.x;
  PerturbationMatrix M = alloc(N, Provenance::Explicit);

  auto inv_sum = [&](int n, int skip) {  // primed sum of 1/(y_n - y_j)
    cplx s = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == n || j == skip) continue;
      s += 1.0 / (y[n] - y[j]);
    }
    return s;
  };
  auto pair_sum = [&](int n) {  // primed sum over j < k
    cplx s = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == n) continue;
      for (int k = j + 1; k < N; ++k) {
        if (k == n) continue;
        s += 1.0 / ((y[n] - y[j]) * (y[n] - y[k]));
      }
    }
    return s;
  };

  if (spec.op_kind == OperatorKind::Differential) {
    if (spec.eta_kind == EtaKind::X) {  // Hermite
      for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
          if (n == m) {
            M.at(n, m) = 2.0 * (cplx(N) + pair_sum(n) - y[n] * inv_sum(n, -1));
          } else {
            M.at(n, m) =
                2.0 / (y[n] - y[m]) * (inv_sum(n, m) - y[n]);
          }
        }
    } else if (spec.eta_kind == EtaKind::XSquared) {  // Laguerre
      const double alpha = param(spec, "g") - 0.5;
      for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) {
          if (n == m) {
            M.at(n, m) =
                4.0 * (cplx(N) + 2.0 * y[n] * pair_sum(n) -
                       (y[n] - alpha - 1.0) * inv_sum(n, -1));
          } else {
            M.at(n, m) = 4.0 * (x[m] / x[n]) / (y[n] - y[m]) *
                         (2.0 * y[n] * inv_sum(n, m) - (y[n] - alpha - 1.0));
          }
        }
    } else {  // Jacobi
      const double alpha = param(spec, "g") - 0.5;
      const double beta = param(spec, "h") - 0.5;
      // The linear coefficient is alpha+beta+2, as in the zero equation and
      // the inverse-gap-squared similarity; with alpha+beta the closed form
      // loses the spectrum already for the Legendre case at degree 2.
      for (int n = 0; n < N; ++n) {
        cplx lin_n = (alpha + beta + 2.0) * y[n] + (alpha - beta);
        for (int m = 0; m < N; ++m) {
          if (n == m) {
            M.at(n, m) = 4.0 * (cplx(N * (N + alpha + beta + 1.0)) +
                                2.0 * (1.0 - y[n] * y[n]) * pair_sum(n) -
                                lin_n * inv_sum(n, -1));
          } else {
            cplx ratio = std::sin(2.0 * x[m]) / std::sin(2.0 * x[n]);
            M.at(n, m) = 4.0 * ratio / (y[n] - y[m]) *
                         (2.0 * (1.0 - y[n] * y[n]) * inv_sum(n, m) - lin_n);
          }
        }
      }
    }
    return M;
  }

  if (spec.op_kind == OperatorKind::ImaginaryShift) {
    if (spec.eta_kind == EtaKind::X) {
      // continuous Hahn / Meixner-Pollaczek group
      for (int n = 0; n < N; ++n) {
        cplx V = spec.forward_fn(x[n]), W = spec.backward_fn(x[n]);
        cplx full = gap_product(x[n], y, n);
        for (int m = 0; m < N; ++m) {
          if (n == m) {
            cplx up = gap_product(x[n] - kI, y, n);
            cplx dn = gap_product(x[n] + kI, y, n);
            M.at(n, m) = -(V * up + W * dn) / full + EN + V + W;
          } else {
            cplx up = gap_product(x[n] - kI, y, n, m);
            cplx dn = gap_product(x[n] + kI, y, n, m);
            M.at(n, m) = kI * (V * up - W * dn) / full;
          }
        }
      }
    } else if (spec.eta_kind == EtaKind::XSquared) {
      // Wilson / continuous dual Hahn group
      for (int n = 0; n < N; ++n) {
        cplx V = spec.forward_fn(x[n]), W = spec.backward_fn(x[n]);
        cplx um = (x[n] - kI) * (x[n] - kI);
        cplx up = (x[n] + kI) * (x[n] + kI);
        cplx full = gap_product(y[n], y, n);
        for (int m = 0; m < N; ++m) {
          if (n == m) {
            M.at(n, m) =
                -(V * gap_product(um, y, n) + W * gap_product(up, y, n)) /
                    full +
                EN + V + W;
          } else {
            M.at(n, m) = (x[m] / x[n]) / full *
                         (V * (1.0 + 2.0 * kI * x[n]) *
                              gap_product(um, y, n, m) +
                          W * (1.0 - 2.0 * kI * x[n]) *
                              gap_product(up, y, n, m));
          }
        }
      }
    } else {
      // Askey-Wilson group; off-diagonal prefactor kept exactly as printed
      const double q = spec.params.q;
      for (int n = 0; n < N; ++n) {
        cplx V = spec.forward_fn(x[n]), W = spec.backward_fn(x[n]);
        cplx z = std::exp(kI * x[n]);
        cplx em = 0.5 * (q * z + 1.0 / (q * z));
        cplx ep = 0.5 * (z / q + q / z);
        cplx full = gap_product(y[n], y, n);
        for (int m = 0; m < N; ++m) {
          if (n == m) {
            M.at(n, m) =
                EN + V + W -
                (V * gap_product(em, y, n) + W * gap_product(ep, y, n)) / full;
          } else {
            cplx ratio = std::sin(2.0 * x[m]) / std::sin(2.0 * x[n]);
            M.at(n, m) = ratio * (1.0 / q - 1.0) / (2.0 * full) *
                         (V / z * (1.0 - q * z * z) *
                              gap_product(em, y, n, m) +
                          W * z * (1.0 - q / (z * z)) *
                              gap_product(ep, y, n, m));
          }
        }
      }
    }
    return M;
  }

  // real shifts
  if (spec.eta_kind == EtaKind::X) {
    // Hahn / Krawtchouk / Meixner / Charlier group
    for (int n = 0; n < N; ++n) {
      cplx B = spec.forward_fn(x[n]), D = spec.backward_fn(x[n]);
      cplx full = gap_product(x[n], y, n);
      for (int m = 0; m < N; ++m) {
        if (n == m) {
          cplx up = gap_product(x[n] + 1.0, y, n);
          cplx dn = gap_product(x[n] - 1.0, y, n);
          M.at(n, m) = (B * up + D * dn) / full + EN - B - D;
        } else {
          cplx up = gap_product(x[n] + 1.0, y, n, m);
          cplx dn = gap_product(x[n] - 1.0, y, n, m);
          M.at(n, m) = (B * up - D * dn) / full;
        }
      }
    }
    return M;
  }

  // Racah group pattern shared by the quadratic, q-linear and q-bilinear
  // coordinates
  for (int n = 0; n < N; ++n) {
    cplx B = spec.forward_fn(x[n]), D = spec.backward_fn(x[n]);
    cplx eup = spec.eta(x[n] + 1.0);
    cplx edn = spec.eta(x[n] - 1.0);
    cplx full = gap_product(y[n], y, n);
    for (int m = 0; m < N; ++m) {
      if (n == m) {
        M.at(n, m) =
            (B * gap_product(eup, y, n) + D * gap_product(edn, y, n)) / full +
            EN - B - D;
      } else {
        cplx ratio = spec.eta_dot(x[m]) / spec.eta_dot(x[n]);
        M.at(n, m) = ratio / full *
                     (B * gap_product(eup, y, m) + D * gap_product(edn, y, m));
      }
    }
  }
  return M;
}

bool has_simplified_form(const FamilySpec& spec) {
  return spec.op_kind == OperatorKind::RealShift &&
         spec.eta_kind == EtaKind::X;
}

PerturbationMatrix build_explicit_simplified(const FamilySpec& spec,
                                             const PointSet& pts, int N) {
  if (!has_simplified_form(spec))
    throw DomainError(spec.name + ": no simplified closed form");
  require_points(spec, pts, N);
  const double EN = spec.energy(N);
  PerturbationMatrix M = alloc(N, Provenance::Explicit);
  for (int n = 0; n < N; ++n) {
    cplx B = spec.forward_fn(pts.x[n]), D = spec.backward_fn(pts.x[n]);
    cplx prod = 1.0;
    for (int j = 0; j < N; ++j) {
      if (j == n) continue;
      prod *= 1.0 + 1.0 / (pts.x[n] - pts.x[j]);
    }
    for (int m = 0; m < N; ++m) {
      if (n == m) {
        M.at(n, m) = B * prod + EN - B - D;
      } else {
        M.at(n, m) = B * prod *
                     (1.0 / (pts.x[n] + 1.0 - pts.x[m]) -
                      1.0 / (pts.x[n] - 1.0 - pts.x[m]));
      }
    }
  }
  return M;
}

double max_relative_deviation(const PerturbationMatrix& a,
                              const PerturbationMatrix& b) {
  double scale = std::max(a.max_abs(), b.max_abs());
  if (scale == 0.0) return 0.0;
  double dev = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    dev = std::max(dev, std::abs(a.entries[i] - b.entries[i]));
  return dev / scale;
}

std::vector<cplx> ahmed_matrix(const FamilySpec& spec, const ZeroSet& zeros) {
  if (!spec.is_classical())
    throw DomainError(spec.name +
                      ": inverse-gap-squared matrices exist for the "
                      "differential families only");
  const int N = zeros.degree;
  const auto& y = zeros.y;
  auto weight = [&](int j) -> cplx {
    switch (spec.eta_kind) {
      case EtaKind::X: return 1.0;
      case EtaKind::XSquared: return y[j];
      default: return 1.0 - y[j] * y[j];
    }
  };
  std::vector<cplx> A(static_cast<std::size_t>(N) * N, cplx(0.0));
  for (int n = 0; n < N; ++n) {
    cplx diag = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == n) continue;
      cplx d = y[n] - y[j];
      cplx w = weight(j) / (d * d);
      diag += w;
      A[n * N + j] = -w;
    }
    A[n * N + n] = diag;
  }
  return A;
}

double similarity_residual(const FamilySpec& spec, const ZeroSet& zeros) {
  const int N = zeros.degree;
  std::vector<cplx> A = ahmed_matrix(spec, zeros);
  PerturbationMatrix M =
      build_explicit(spec, points_from_zeros(zeros), N);
  PerturbationMatrix T = M;  // same shape
  if (spec.eta_kind == EtaKind::X) {
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m)
        T.at(n, m) = 2.0 * (A[n * N + m] + (n == m ? 1.0 : 0.0));
  } else if (spec.eta_kind == EtaKind::XSquared) {
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m)
        T.at(n, m) = 4.0 * (2.0 * A[n * N + m] + (n == m ? 1.0 : 0.0)) *
                     zeros.x[n] / zeros.x[m];
  } else {
    const double alpha = param(spec, "g") - 0.5;
    const double beta = param(spec, "h") - 0.5;
    const double shift = 2.0 * N + alpha + beta;
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m)
        T.at(n, m) = 4.0 *
                     (2.0 * A[n * N + m] + (n == m ? cplx(shift) : 0.0)) *
                     std::sin(2.0 * zeros.x[n]) / std::sin(2.0 * zeros.x[m]);
  }
  return max_relative_deviation(M, T);
}

void write_matrix_csv(std::ostream& os, const PerturbationMatrix& m) {
  os << "row,col,re,im\n";
  char buf[128];
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", r, c,
                    m.at(r, c).real(), m.at(r, c).imag());
      os << buf;
    }
}

}  // namespace opzero
