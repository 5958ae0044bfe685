#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "opzero/perturb.hpp"
#include "opzero/report.hpp"
#include "opzero/spectra.hpp"

using namespace opzero;

namespace {
FamilySpec make(const std::string& name, std::map<std::string, cplx> v,
                double q = 0.0) {
  return resolve_family(name, v, q, q > 0.0);
}
}  // namespace

TEST_CASE("hand oracles for the smallest matrices") {
  FamilySpec h = make("hermite", {});
  ZeroSet z1 = compute_zeros(h, 1);
  PerturbationMatrix m1 = build_generic(h, points_from_zeros(z1), 1);
  CHECK(m1.at(0, 0).real() == doctest::Approx(2.0));

  ZeroSet z2 = compute_zeros(h, 2);
  PerturbationMatrix m2 = build_generic(h, points_from_zeros(z2), 2);
  CHECK(m2.at(0, 0).real() == doctest::Approx(3.0));
  CHECK(m2.at(0, 1).real() == doctest::Approx(-1.0));
  CHECK(m2.at(1, 0).real() == doctest::Approx(-1.0));
  CHECK(m2.at(1, 1).real() == doctest::Approx(3.0));

  FamilySpec l = make("laguerre", {{"g", 0.9}});
  ZeroSet lz = compute_zeros(l, 1);
  PerturbationMatrix lm = build_generic(l, points_from_zeros(lz), 1);
  CHECK(lm.at(0, 0).real() == doctest::Approx(4.0));
}

TEST_CASE("explicit closed forms match the defining construction") {
  Rng rng(41);
  // every family with an asserted printed form, at a representative draw
  for (const FamilyInfo& info : family_catalog()) {
    bool cosx_group = info.op_kind == OperatorKind::ImaginaryShift;
    for (int N : {2, 5}) {
      ParamSet p = draw_measurable_params(info.name, N, rng);
      FamilySpec s = resolve_family(p);
      ZeroSet z = compute_zeros(s, N);
      PointSet pts = points_from_zeros(z);
      PerturbationMatrix g = build_generic(s, pts, N);
      PerturbationMatrix e = build_explicit(s, pts, N);
      double dev = max_relative_deviation(g, e);
      if (cosx_group && s.eta_kind == EtaKind::CosX) {
        // printed off-diagonal prefactor differs; reported, not asserted
        continue;
      }
      CHECK(dev <= 1e-9);
    }
  }
}

TEST_CASE("matrix entries stay real at true zeros") {
  Rng rng(42);
  for (const char* name : {"hermite", "jacobi", "wilson", "askey_wilson",
                           "racah", "q_racah", "meixner"}) {
    ParamSet p = draw_measurable_params(name, 6, rng);
    FamilySpec s = resolve_family(p);
    ZeroSet z = compute_zeros(s, 6);
    PerturbationMatrix m = build_generic(s, points_from_zeros(z), 6);
    CHECK(m.max_imag() <= 1e-9 * std::max(1.0, m.max_abs()));
  }
}

TEST_CASE("row action on the corollary vector returns E(N)") {
  Rng rng(43);
  for (const FamilyInfo& info : family_catalog()) {
    ParamSet p = draw_measurable_params(info.name, 6, rng);
    FamilySpec s = resolve_family(p);
    ZeroSet z = compute_zeros(s, 6);
    PerturbationMatrix m = build_generic(s, points_from_zeros(z), 6);
    std::vector<cplx> u(6);
    for (int n = 0; n < 6; ++n)
      u[n] = 1.0 / (s.eta_dot(z.x[n]) * gap_product(z.y[n], z.y, n));
    double en = s.energy(6);
    double scale = 0.0;
    for (cplx v : u) scale = std::max(scale, std::abs(v));
    for (int n = 0; n < 6; ++n) {
      cplx acc = 0.0;
      for (int j = 0; j < 6; ++j) acc += m.at(n, j) * u[j];
      CHECK(std::abs(acc - en * u[n]) <= 1e-8 * en * scale);
    }
  }
}

TEST_CASE("inverse-gap-squared matrices and similarity transforms") {
  FamilySpec h = make("hermite", {});
  ZeroSet z2 = compute_zeros(h, 2);
  std::vector<cplx> A = ahmed_matrix(h, z2);
  CHECK(A[0].real() == doctest::Approx(0.5));
  CHECK(A[1].real() == doctest::Approx(-0.5));
  CHECK(A[2].real() == doctest::Approx(-0.5));
  CHECK(A[3].real() == doctest::Approx(0.5));
  CHECK(similarity_residual(h, z2) <= 1e-14);

  ZeroSet z1 = compute_zeros(h, 1);
  CHECK(std::abs(ahmed_matrix(h, z1)[0]) <= 1e-14);
  CHECK(similarity_residual(h, z1) <= 1e-14);

  // eigenvalues (N-m-1)/2 of the Laguerre-type matrix
  FamilySpec l = make("laguerre", {{"g", 1.0}});
  ZeroSet lz = compute_zeros(l, 3);
  std::vector<cplx> B = ahmed_matrix(l, lz);
  PerturbationMatrix bm;
  bm.n = 3;
  bm.entries = B;
  auto pairs = eigen_decompose(bm);
  CHECK(pairs[0].value.real() == doctest::Approx(1.0));
  CHECK(pairs[1].value.real() == doctest::Approx(0.5));
  CHECK(std::abs(pairs[2].value) <= 1e-10);
  CHECK(similarity_residual(l, lz) <= 1e-10);

  FamilySpec j = make("jacobi", {{"g", 0.5}, {"h", 0.5}});
  CHECK(similarity_residual(j, compute_zeros(j, 4)) <= 1e-9);
}

TEST_CASE("simplified form of the linear-lattice group at true zeros") {
  FamilySpec s = make("hahn", {{"a", 1.5}, {"b", 0.8}, {"N", 9.0}});
  ZeroSet z = compute_zeros(s, 5);
  PointSet pts = points_from_zeros(z);
  PerturbationMatrix g = build_generic(s, pts, 5);
  PerturbationMatrix simp = build_explicit_simplified(s, pts, 5);
  // off-diagonal entries agree; the printed diagonal deviates (its two
  // lattice products coincide at true zeros and add, which the shortened
  // form drops), so the diagonal is diagnostic only
  double off_dev = 0.0, diag_dev = 0.0;
  for (int n = 0; n < 5; ++n)
    for (int m = 0; m < 5; ++m) {
      double d = std::abs(g.at(n, m) - simp.at(n, m));
      (n == m ? diag_dev : off_dev) = std::max(n == m ? diag_dev : off_dev, d);
    }
  CHECK(off_dev <= 1e-9 * g.max_abs());
  CHECK(diag_dev > 1e-3 * g.max_abs());
  CHECK(!has_simplified_form(make("racah", {{"a", 14.0}, {"b", 1.2},
                                            {"d", 1.0}, {"N", 10.0}})));
}

TEST_CASE("random point sets respect separation and pole constraints") {
  FamilySpec j = make("jacobi", {{"g", 0.7}, {"h", 1.1}});
  Rng rng(44);
  PointSet p = random_points(j, 8, rng);
  CHECK(p.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(p.x[i]) <= 2.0);
    CHECK(std::abs(std::sin(2.0 * p.x[i])) >= 1e-3);
    for (int k = i + 1; k < 8; ++k) {
      CHECK(std::abs(p.x[i] - p.x[k]) >= 1e-3);
      CHECK(std::abs(p.y[i] - p.y[k]) >= 1e-3);
    }
  }
  // deterministic under the seed
  Rng rng2(44);
  PointSet p2 = random_points(j, 8, rng2);
  for (int i = 0; i < 8; ++i) CHECK(p.x[i] == p2.x[i]);
  CHECK_THROWS_AS(random_points(make("hahn", {{"a", 1.0}, {"b", 1.0},
                                              {"N", 8.0}}),
                                4, rng),
                  DomainError);
}

TEST_CASE("matrix CSV dump carries full precision") {
  FamilySpec h = make("hermite", {});
  ZeroSet z = compute_zeros(h, 3);
  PerturbationMatrix m = build_generic(h, points_from_zeros(z), 3);
  std::ostringstream os;
  write_matrix_csv(os, m);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "row,col,re,im");
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) {
    int r, c;
    double re, im;
    CHECK(std::sscanf(line.c_str(), "%d,%d,%lg,%lg", &r, &c, &re, &im) == 4);
    CHECK(re == m.at(r, c).real());  // round-trips exactly at 17 digits
    ++rows;
  }
  CHECK(rows == 9);
}
