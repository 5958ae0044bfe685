#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opzero/hyper.hpp"
#include "opzero/rng.hpp"

using namespace opzero;
using namespace opzero::hyper;

namespace {
cplx F(std::vector<cplx> num, std::vector<cplx> den, cplx z, int n) {
  SeriesParams p;
  p.numerator = std::move(num);
  p.denominator = std::move(den);
  p.argument = z;
  p.term_count = n;
  return hyper_F(p);
}
cplx PHI(std::vector<cplx> num, std::vector<cplx> den, cplx z, double q,
         int n) {
  SeriesParams p;
  p.numerator = std::move(num);
  p.denominator = std::move(den);
  p.argument = z;
  p.q = q;
  p.term_count = n;
  return hyper_phi(p);
}
}  // namespace

TEST_CASE("shifted factorial basics") {
  CHECK(pochhammer(3.0, 2).real() == doctest::Approx(12.0));
  CHECK(pochhammer(cplx(2.5, 1.0), 0) == cplx(1.0));
  CHECK(pochhammer(1.0, 4).real() == doctest::Approx(24.0));
}

TEST_CASE("shifted factorial recurrence") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    cplx a(rng.uniform(-4, 4), rng.uniform(-2, 2));
    int n = rng.uniform_int(0, 30);
    cplx lhs = pochhammer(a, n + 1);
    cplx rhs = pochhammer(a, n) * (a + static_cast<double>(n));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("q-shifted factorial basics and recurrence") {
  CHECK(q_pochhammer(cplx(0.3, 0.7), 0.5, 0) == cplx(1.0));
  CHECK(q_pochhammer(0.5, 0.5, 2).real() == doctest::Approx(3.0 / 8.0));
  CHECK(q_pochhammer(0.0, 0.37, 9).real() == doctest::Approx(1.0));
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    cplx a(rng.uniform(-1, 1), rng.uniform(-1, 1));
    double q = rng.uniform(0.1, 0.95);
    int n = rng.uniform_int(0, 30);
    cplx lhs = q_pochhammer(a, q, n + 1);
    cplx rhs = q_pochhammer(a, q, n) * (1.0 - a * std::pow(q, n));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("terminating 2F1 and 3F2 values") {
  CHECK(F({-1.0, 2.0}, {4.0}, 1.0, 1).real() == doctest::Approx(0.5));
  // Hahn polynomial at x = 0: the 0 numerator kills every k >= 1 term
  CHECK(F({-3.0, 3.0 + 1.5 + 2.5 - 1.0, 0.0}, {1.5, -9.0}, 1.0, 3).real() ==
        doctest::Approx(1.0));
  CHECK(F({-2.0, 1.0}, {1.0}, 1.0, 2).real() == doctest::Approx(0.0));
}

TEST_CASE("terminating basic series values") {
  // single-term series
  CHECK(PHI({1.0, 0.3}, {0.7}, 0.4, 0.5, 0).real() == doctest::Approx(1.0));
  // two-term sum evaluates to -5/7
  CHECK(PHI({2.0, 0.25}, {0.125}, 1.0, 0.5, 1).real() ==
        doctest::Approx(-5.0 / 7.0));
  // q-Racah-style series at x = 0: the (1;q)_k factor kills k >= 1
  double q = 0.7;
  CHECK(PHI({std::pow(q, -4), 0.3 * std::pow(q, 4), 1.0},
            {0.02, 0.8, std::pow(q, -9)}, q, q, 4)
            .real() == doctest::Approx(1.0));
}

TEST_CASE("vanishing denominator raises a domain error") {
  CHECK_THROWS_AS(F({-3.0, 1.0}, {-1.0}, 1.0, 3), DomainError);
  CHECK_THROWS_AS(PHI({std::pow(0.5, -3), 0.3}, {std::pow(0.5, -1)}, 0.5, 0.5,
                      3),
                  DomainError);
}

TEST_CASE("real parameters give real values") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    cplx v = F({cplx(-rng.uniform_int(1, 9)), rng.uniform(-3, 3)},
               {rng.uniform(0.5, 4.0)}, rng.uniform(-2, 2),
               rng.uniform_int(1, 9));
    CHECK(std::abs(v.imag()) <= 1e-13 * (1.0 + std::abs(v)));
    double q = rng.uniform(0.2, 0.9);
    int n = rng.uniform_int(1, 9);
    cplx w = PHI({std::pow(q, -n), rng.uniform(-0.9, 0.9)},
                 {rng.uniform(-0.9, 0.9)}, rng.uniform(-1, 1), q, n);
    CHECK(std::abs(w.imag()) <= 1e-13 * (1.0 + std::abs(w)));
  }
}

TEST_CASE("termination index honoured exactly") {
  // all numerator parameters 0 on the terminating slot -> 1
  CHECK(F({0.0, 0.0}, {2.0}, 0.7, 6).real() == doctest::Approx(1.0));
  // sums exactly term_count + 1 terms
  cplx two_terms = F({-5.0}, {1.0}, 1.0, 1);
  CHECK(two_terms.real() == doctest::Approx(1.0 - 5.0));
}
