#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opzero/report.hpp"
#include "opzero/spectra.hpp"

using namespace opzero;

namespace {
FamilySpec make(const std::string& name, std::map<std::string, cplx> v,
                double q = 0.0) {
  return resolve_family(name, v, q, q > 0.0);
}

PerturbationMatrix matrix2(cplx a, cplx b, cplx c, cplx d) {
  PerturbationMatrix m;
  m.n = 2;
  m.entries = {a, b, c, d};
  return m;
}
}  // namespace

TEST_CASE("eigendecomposition of small matrices") {
  auto pairs = eigen_decompose(matrix2(3.0, -1.0, -1.0, 3.0));
  CHECK(pairs[0].value.real() == doctest::Approx(4.0));
  CHECK(pairs[1].value.real() == doctest::Approx(2.0));
  // eigenvectors proportional to (1,-1) and (1,1), unit norm, leading
  // significant entry real positive
  CHECK(pairs[0].vector[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(pairs[0].vector[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(pairs[1].vector[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(pairs[1].vector[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));

  PerturbationMatrix id3;
  id3.n = 3;
  id3.entries.assign(9, cplx(0.0));
  for (int i = 0; i < 3; ++i) id3.entries[i * 3 + i] = 1.0;
  auto ones = eigen_decompose(id3);
  for (const EigenPair& p : ones)
    CHECK(p.value.real() == doctest::Approx(1.0));

  PerturbationMatrix one;
  one.n = 1;
  one.entries = {cplx(2.0)};
  auto single = eigen_decompose(one);
  CHECK(single[0].value.real() == doctest::Approx(2.0));
  CHECK(single[0].vector[0].real() == doctest::Approx(1.0));
}

TEST_CASE("spectrum matching") {
  FamilySpec h = make("hermite", {});
  auto pairs = eigen_decompose(matrix2(3.0, -1.0, -1.0, 3.0));
  SpectrumReport rep = match_spectrum(pairs, h, 2, 1e-7);
  CHECK(rep.theoretical[0] == doctest::Approx(4.0));
  CHECK(rep.theoretical[1] == doctest::Approx(2.0));
  CHECK(rep.eigenvalue_residuals[0] <= 1e-13);
  CHECK(rep.eigenvalue_residuals[1] <= 1e-13);
  CHECK(rep.eigenvalues_pass);
  CHECK(!rep.near_degenerate);

  // assignment is a bijection
  std::vector<bool> used(2, false);
  for (int idx : rep.assignment) {
    CHECK(!used[idx]);
    used[idx] = true;
  }

  ZeroSet z3 = compute_zeros(h, 3);
  auto p3 = eigen_decompose(build_generic(h, points_from_zeros(z3), 3));
  SpectrumReport r3 = match_spectrum(p3, h, 3, 1e-7);
  CHECK(r3.theoretical == std::vector<double>{6.0, 4.0, 2.0});

  FamilySpec j = make("jacobi", {{"g", 1.5}, {"h", 1.5}});  // alpha=beta=1
  ZeroSet jz = compute_zeros(j, 2);
  auto jp = eigen_decompose(build_generic(j, points_from_zeros(jz), 2));
  SpectrumReport jr = match_spectrum(jp, j, 2, 1e-7);
  CHECK(jr.theoretical[0] == doctest::Approx(40.0));
  CHECK(jr.theoretical[1] == doctest::Approx(24.0));
  CHECK(jr.eigenvalues_pass);
}

TEST_CASE("predicted eigenvectors at Hermite zeros") {
  FamilySpec h = make("hermite", {});
  ZeroSet z = compute_zeros(h, 2);
  std::vector<cplx> t0 = corollary_target(h, z, 0);
  CHECK(t0[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t0[1].real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  std::vector<cplx> t1 = corollary_target(h, z, 1);
  CHECK(t1[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t1[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(corollary_target(h, z, 2), DomainError);
}

TEST_CASE("collinearity residual") {
  CHECK(collinearity_residual({cplx(1.0), cplx(-1.0)},
                              {cplx(-std::sqrt(2.0)), cplx(std::sqrt(2.0))}) <=
        1e-15);
  CHECK(collinearity_residual({cplx(1.0), cplx(0.0)},
                              {cplx(0.0), cplx(1.0)}) ==
        doctest::Approx(1.0));
  FamilySpec h = make("hermite", {});
  ZeroSet z = compute_zeros(h, 2);
  auto pairs = eigen_decompose(build_generic(h, points_from_zeros(z), 2));
  CHECK(collinearity_residual(pairs[0].vector, corollary_target(h, z, 0)) <=
        1e-12);
  CHECK_THROWS_AS(collinearity_residual({cplx(1.0)}, {cplx(1.0), cplx(0.0)}),
                  DomainError);
}

TEST_CASE("reconstruction of the lower-degree polynomials") {
  FamilySpec h = make("hermite", {});
  ZeroSet z = compute_zeros(h, 2);
  std::vector<cplx> c0 =
      reconstruct_polynomial(h, z, {cplx(1.0), cplx(-1.0)});
  CHECK(std::abs(c0[1]) <= 1e-14 * std::abs(c0[0]));  // a constant
  std::vector<cplx> c1 = reconstruct_polynomial(h, z, {cplx(1.0), cplx(1.0)});
  CHECK(std::abs(c1[0]) <= 1e-14 * std::abs(c1[1]));  // proportional to eta
  CHECK(c1[1].real() == doctest::Approx(2.0));

  // corollary targets reconstruct P_m across families
  Rng rng(51);
  for (const char* name : {"hermite", "wilson", "hahn", "q_racah",
                           "askey_wilson", "little_q_laguerre"}) {
    ParamSet p = draw_measurable_params(name, 7, rng);
    FamilySpec s = resolve_family(p);
    ZeroSet zs = compute_zeros(s, 7);
    for (int m = 0; m < 7; ++m) {
      double rr =
          reconstruction_residual(s, zs, corollary_target(s, zs, m), m);
      CHECK(rr <= 1e-8);
    }
  }
}

TEST_CASE("interpolation form is exact below the node count") {
  std::vector<std::pair<cplx, cplx>> sq;
  for (double x : {0.0, 1.0, 2.0, 3.0}) sq.push_back({x, x * x});
  CHECK(lagrange_interpolate(sq, cplx(5.0)).real() == doctest::Approx(25.0));
  CHECK(lagrange_interpolate(sq, cplx(2.0)).real() == doctest::Approx(4.0));

  std::vector<std::pair<cplx, cplx>> cst;
  for (double x : {-1.0, 0.4, 2.2}) cst.push_back({x, 7.0});
  CHECK(lagrange_interpolate(cst, cplx(13.7)).real() == doctest::Approx(7.0));

  FamilySpec h = make("hermite", {});
  ZeroSet z = compute_zeros(h, 4);
  std::vector<std::pair<cplx, cplx>> samples;
  for (cplx x : z.x) samples.push_back({x, h.poly(2, x)});
  CHECK(lagrange_interpolate(samples, cplx(0.3)).real() ==
        doctest::Approx(-1.64));

  // random polynomial data of degree k < node count, 20 probes
  Rng rng(52);
  for (int nodes = 3; nodes <= 12; ++nodes) {
    int k = rng.uniform_int(0, nodes - 1);
    std::vector<cplx> coef(k + 1);
    for (cplx& c : coef) c = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    auto eval = [&](cplx x) {
      cplx v = 0.0;
      for (int i = k; i >= 0; --i) v = v * x + coef[i];
      return v;
    };
    std::vector<std::pair<cplx, cplx>> data;
    for (int i = 0; i < nodes; ++i) {
      cplx x(rng.uniform(-3, 3), rng.uniform(-1, 1));
      bool dup = false;
      for (auto& [n, v] : data) dup |= std::abs(n - x) < 1e-6;
      if (dup) {
        --i;
        continue;
      }
      data.push_back({x, eval(x)});
    }
    for (int probe = 0; probe < 20; ++probe) {
      cplx x(rng.uniform(-3, 3), rng.uniform(-1, 1));
      cplx got = lagrange_interpolate(data, x);
      cplx want = eval(x);
      CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
    }
  }
  CHECK_THROWS_AS(
      lagrange_interpolate({{cplx(1.0), cplx(2.0)}, {cplx(1.0), cplx(3.0)}},
                           cplx(0.0)),
      DomainError);
}

TEST_CASE("spectrum invariance on random point sets") {
  FamilySpec h = make("hermite", {});
  DiophantineReport hr = diophantine_experiment(h, 3, 100, 1);
  CHECK(hr.spectrum == std::vector<double>{6.0, 4.0, 2.0});
  CHECK(hr.max_residual <= 1e-8);
  CHECK(hr.pass);

  FamilySpec l = make("laguerre", {{"g", 1.2}});  // alpha = 0.7
  DiophantineReport lr = diophantine_experiment(l, 2, 100, 2);
  CHECK(lr.spectrum == std::vector<double>{8.0, 4.0});
  CHECK(lr.pass);

  FamilySpec j = make("jacobi", {{"g", 1.5}, {"h", 1.5}});
  DiophantineReport jr = diophantine_experiment(j, 2, 50, 3);
  CHECK(jr.spectrum == std::vector<double>{40.0, 24.0});
  CHECK(jr.pass);

  // deterministic under the seed
  DiophantineReport again = diophantine_experiment(h, 3, 100, 1);
  CHECK(again.max_residual == hr.max_residual);

  CHECK_THROWS_AS(diophantine_experiment(
                      make("hahn", {{"a", 1.0}, {"b", 1.0}, {"N", 8.0}}), 3,
                      10, 1),
                  DomainError);
}
