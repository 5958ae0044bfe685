// Acceptance suite: every verification claim at its pinned tolerance, one
// pass/fail line per criterion. Exit code is the number of failed criteria.
//
//   acceptance [--criterion K] [--seed S]
#include <cstdio>
#include <cstring>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "opzero/report.hpp"

using namespace opzero;

namespace {

std::uint64_t g_seed = 42;

const SweepResult& master_grid() {
  static const SweepResult grid = [] {
    SweepOptions opt;  // every family, N in 2..8, 5 draws per cell
    opt.degree_lo = 2;
    opt.degree_hi = 8;
    opt.draws = 5;
    opt.seed = g_seed;
    return run_sweep(opt);
  }();
  return grid;
}

bool grid_complete(std::string& note) {
  int missing = 0;
  for (const SweepRun& run : master_grid().runs)
    if (!run.completed) ++missing;
  if (missing) note = std::to_string(missing) + " runs did not complete";
  return missing == 0;
}

double drawn(const SweepRun& run, const char* key) {
  return run.report.params.values.at(key).real();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& note) {
  // matched eigenvalue residuals <= 1e-7 across the grid, and the printed
  // closed-form spectra for the special cases
  if (!grid_complete(note)) return false;
  double worst = 0.0;
  for (const SweepRun& run : master_grid().runs) {
    const VerificationReport& r = run.report;
    for (double v : r.spectrum.eigenvalue_residuals)
      worst = std::max(worst, v);
    const int N = r.degree;
    for (int m = 0; m < N; ++m) {
      double got = r.spectrum.theoretical[m];
      double want = got;
      if (run.family == "hermite") want = 2.0 * (N - m);
      if (run.family == "laguerre") want = 4.0 * (N - m);
      if (run.family == "jacobi") {
        double ab = drawn(run, "g") + drawn(run, "h") - 1.0;  // alpha+beta
        want = 4.0 * (N - m) * (N + m + ab + 1.0);
      }
      if (run.family == "continuous_dual_hahn") want = double(N - m);
      if (std::abs(got - want) > 1e-10 * (1.0 + std::abs(want))) {
        note = run.family + ": printed spectrum form mismatch";
        return false;
      }
    }
  }
  note = "worst residual " + num(worst);
  return worst <= 1e-7;
}

bool criterion2(std::string& note) {
  if (!grid_complete(note)) return false;
  double worst = 0.0;
  int skipped = 0;
  for (const SweepRun& run : master_grid().runs) {
    if (run.report.vector_checks_skipped) {
      ++skipped;
      continue;
    }
    for (double v : run.report.spectrum.collinearity_residuals)
      worst = std::max(worst, v);
  }
  note = "worst residual " + num(worst) +
         (skipped ? " (" + std::to_string(skipped) + " near-degenerate runs skipped)"
                  : "");
  return worst <= 1e-6;
}

bool criterion3(std::string& note) {
  if (!grid_complete(note)) return false;
  double worst = 0.0;
  for (const SweepRun& run : master_grid().runs) {
    if (run.report.vector_checks_skipped) continue;
    for (double v : run.report.spectrum.reconstruction_residuals)
      worst = std::max(worst, v);
  }
  note = "worst residual " + num(worst);
  return worst <= 1e-7;
}

bool criterion4(std::string& note) {
  // spectrum invariance of the explicit matrices on 100 random complex
  // point sets per configuration
  double worst = 0.0;
  for (const char* name : {"hermite", "laguerre", "jacobi"}) {
    for (int N = 2; N <= 8; ++N) {
      Rng rng(derive_seed(g_seed, std::string("dio-") + name, N, 0));
      ParamSet p = draw_params(name, N, rng);
      FamilySpec spec = resolve_family(p);
      DiophantineReport rep =
          diophantine_experiment(spec, N, 100, rng.next_u64());
      worst = std::max(worst, rep.max_residual);
    }
  }
  note = "worst deviation " + num(worst);
  return worst <= 1e-8;
}

bool criterion5(std::string& note) {
  // inverse-gap-squared similarity: exact transform for the eta = x family,
  // 1e-9 for the other two, 20 draws each, N <= 8
  double worst_h = 0.0, worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    Rng rng(derive_seed(g_seed, "similarity", draw, 0));
    int N = 2 + draw % 7;
    FamilySpec h = resolve_family("hermite", {});
    worst_h = std::max(worst_h, similarity_residual(h, compute_zeros(h, N)));
    for (const char* name : {"laguerre", "jacobi"}) {
      ParamSet p = draw_measurable_params(name, N, rng);
      FamilySpec s = resolve_family(p);
      worst = std::max(worst, similarity_residual(s, compute_zeros(s, N)));
    }
  }
  note = "eta=x transform " + num(worst_h) + ", others " +
         num(worst);
  return worst_h <= 1e-12 && worst <= 1e-9;
}

bool criterion6(std::string& note) {
  if (!grid_complete(note)) return false;
  double worst = 0.0, worst_cls = 0.0;
  for (const SweepRun& run : master_grid().runs) {
    worst = std::max(worst, run.report.max_zero_equation_residual);
    if (run.report.similarity >= 0.0) {
      worst_cls = std::max(worst_cls,
                           run.report.max_classical_equation_residual);
      worst_cls =
          std::max(worst_cls, run.report.max_inverse_square_residual);
    }
  }
  note = "worst residual " + num(worst) + ", classical identities " +
         num(worst_cls);
  return worst <= 1e-9 && worst_cls <= 1e-9;
}

bool criterion7(std::string& note) {
  if (!grid_complete(note)) return false;
  double worst = 0.0;
  std::map<std::string, double> diagnostics;
  for (const SweepRun& run : master_grid().runs) {
    if (run.report.explicit_match_asserted)
      worst = std::max(worst, run.report.explicit_deviation);
    else
      diagnostics[run.family] =
          std::max(diagnostics[run.family], run.report.explicit_deviation);
  }
  for (const auto& [family, dev] : diagnostics)
    std::printf("        diagnostic: %s printed form deviates by %.3g "
                "(prefactor convention; not asserted)\n",
                family.c_str(), dev);
  note = "worst asserted deviation " + num(worst);
  return worst <= 1e-9;
}

bool criterion8(std::string& note) {
  FamilySpec h = resolve_family("hermite", {});
  ZeroSet z2 = compute_zeros(h, 2);
  PerturbationMatrix m2 = build_generic(h, points_from_zeros(z2), 2);
  double dev = std::max(
      std::max(std::abs(m2.at(0, 0) - cplx(3.0)), std::abs(m2.at(1, 1) - cplx(3.0))),
      std::max(std::abs(m2.at(0, 1) - cplx(-1.0)), std::abs(m2.at(1, 0) - cplx(-1.0))));
  auto pairs = eigen_decompose(m2);
  double e4 = std::abs(pairs[0].value - cplx(4.0));
  double e2 = std::abs(pairs[1].value - cplx(2.0));
  double v4 = collinearity_residual(pairs[0].vector, {cplx(1.0), cplx(-1.0)});
  double v2 = collinearity_residual(pairs[1].vector, {cplx(1.0), cplx(1.0)});

  ZeroSet z1 = compute_zeros(h, 1);
  PerturbationMatrix m1 = build_generic(h, points_from_zeros(z1), 1);
  double d1 = std::abs(m1.at(0, 0) - cplx(2.0));

  FamilySpec l = resolve_family("laguerre", {{"g", 0.75}});
  ZeroSet lz = compute_zeros(l, 1);
  PerturbationMatrix lm = build_generic(l, points_from_zeros(lz), 1);
  double d4 = std::abs(lm.at(0, 0) - cplx(4.0));

  double worst = std::max({dev, e4, e2, v4, v2, d1, d4});
  note = "worst deviation " + num(worst);
  return worst <= 1e-13;
}

struct Criterion {
  int id;
  const char* label;
  bool (*run)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "matched spectra: residuals <= 1e-7, printed closed forms", criterion1},
    {2, "eigenvector collinearity with the predicted vectors <= 1e-6",
     criterion2},
    {3, "lower-degree polynomial reconstruction <= 1e-7", criterion3},
    {4, "spectrum invariance on random point sets <= 1e-8", criterion4},
    {5, "inverse-gap-squared similarity transforms", criterion5},
    {6, "zero equations and gap-sum identities <= 1e-9", criterion6},
    {7, "explicit closed forms match the defining construction <= 1e-9",
     criterion7},
    {8, "hand-checked smallest matrices and eigenpairs", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc)
      g_seed = std::strtoull(argv[++i], nullptr, 10);
  }
  int failures = 0;
  for (const Criterion& c : kCriteria) {
    if (only && c.id != only) continue;
    std::string note;
    bool ok = c.run(note);
    std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.label, note.empty() ? "" : " — ", note.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
