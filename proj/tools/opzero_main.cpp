// Command-line front end: family registry listing, single verifications,
// randomized sweeps, and the point-independence experiments.
#include <CLI11.hpp>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "opzero/report.hpp"

namespace fs = std::filesystem;
using namespace opzero;

namespace {

// "1.5", "-2e-3", "1+2i", "0.2-0.1i", "1.5i"
cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParamError("empty parameter value");
  auto is_split = [&](std::size_t i) {
    if (i == 0 || (s[i] != '+' && s[i] != '-')) return false;
    char prev = s[i - 1];
    return prev != 'e' && prev != 'E' && prev != '+' && prev != '-';
  };
  bool imag_tail = s.back() == 'i' || s.back() == 'j';
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if (is_split(i)) {
      split = i;
      break;
    }
  }
  try {
    if (imag_tail) {
      std::string head = s.substr(0, s.size() - 1);
      if (split == std::string::npos) {
        if (head.empty() || head == "+" || head == "-") head += "1";
        return {0.0, std::stod(head)};
      }
      std::string re = s.substr(0, split);
      std::string im = s.substr(split, s.size() - 1 - split);
      if (im == "+" || im == "-") im += "1";
      return {std::stod(re), std::stod(im)};
    }
    if (split != std::string::npos)
      throw ParamError("malformed complex literal '" + raw + "'");
    return {std::stod(s), 0.0};
  } catch (const std::logic_error&) {
    throw ParamError("malformed numeric literal '" + raw + "'");
  }
}

std::map<std::string, cplx> parse_params(const std::string& list) {
  std::map<std::string, cplx> out;
  if (list.empty()) return out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ParamError("expected key=value in --params, got '" + item + "'");
    out[item.substr(0, eq)] = parse_complex(item.substr(eq + 1));
  }
  return out;
}

std::pair<int, int> parse_degree_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw ParamError("malformed degree range '" + s + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os << text;
}

const char* kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::Differential: return "differential";
    case OperatorKind::ImaginaryShift: return "imaginary shift";
    case OperatorKind::RealShift: return "real shift";
  }
  return "";
}

void print_family(const FamilyInfo& info, std::ostream& os) {
  os << info.name << (info.is_q ? "  [q-family]" : "") << "\n";
  os << "  operator:   " << kind_name(info.op_kind) << ", "
     << info.operator_text << "\n";
  os << "  coordinate: " << info.eta_text << "\n";
  os << "  eigenvalue: " << info.energy_text << "\n";
  os << "  polynomial: " << info.poly_text << "\n";
  if (info.params.empty()) {
    os << "  parameters: none" << (info.is_q ? " besides q" : "") << "\n";
  } else {
    os << "  parameters:\n";
    for (const ParamDesc& p : info.params)
      os << "    " << p.name << (p.complex_ok ? " (complex)" : "")
         << (p.range.empty() ? "" : "  " + p.range) << "\n";
  }
}

std::string reference_document() {
  std::ostringstream os;
  os << "# Family registry\n\n";
  os << "All registered families with their validated parameters, sinusoidal\n"
        "coordinate, operator data and series definition.\n";
  for (const FamilyInfo& info : family_catalog()) {
    os << "\n## " << info.name << "\n\n";
    os << "| field | value |\n|---|---|\n";
    os << "| kind | " << kind_name(info.op_kind)
       << (info.is_q ? ", q in (0,1)" : "") << " |\n";
    os << "| coordinate | `" << info.eta_text << "` |\n";
    os << "| eigenvalue | `" << info.energy_text << "` |\n";
    os << "| operator | `" << info.operator_text << "` |\n";
    os << "| polynomial | `" << info.poly_text << "` |\n";
    if (info.params.empty()) {
      os << "| parameters | none |\n";
    } else {
      for (const ParamDesc& p : info.params)
        os << "| parameter `" << p.name << "` | "
           << (p.complex_ok ? "complex; " : "") << p.range << " |\n";
    }
  }
  return os.str();
}

int cmd_list(const std::string& family, bool doc) {
  if (doc) {
    std::cout << reference_document();
    return 0;
  }
  if (!family.empty()) {
    for (const FamilyInfo& info : family_catalog()) {
      if (info.name == family) {
        print_family(info, std::cout);
        return 0;
      }
    }
    throw ParamError("unknown family '" + family + "'");
  }
  std::cout << family_catalog().size() << " families:\n";
  for (const FamilyInfo& info : family_catalog()) {
    std::cout << "  " << info.name;
    if (!info.params.empty()) {
      std::cout << "  (";
      for (std::size_t i = 0; i < info.params.size(); ++i)
        std::cout << (i ? ", " : "") << info.params[i].name;
      std::cout << ")";
    }
    if (info.is_q) std::cout << "  + q";
    std::cout << "\n";
  }
  return 0;
}

int report_outcome(const VerificationReport& r) {
  for (const auto& [name, ok] : r.checks)
    std::cout << (ok ? "  pass  " : "  FAIL  ") << name << "\n";
  std::cout << (r.overall_pass ? "PASS" : "FAIL") << "  " << r.family
            << " degree " << r.degree << "\n";
  return r.overall_pass ? 0 : 1;
}

int cmd_verify(const std::string& family, const std::string& params,
               double q, bool has_q, int degree, double tol_eig,
               double tol_vec, const std::string& out, bool dump_matrix,
               int degree_cap) {
  FamilySpec spec =
      resolve_family(family, parse_params(params), q, has_q, degree_cap);
  Tolerances tol;
  tol.eigenvalue = tol_eig;
  tol.collinearity = tol_vec;
  VerificationReport r = run_verification(spec, degree, tol, 0);
  if (!out.empty()) write_text(out, report_to_json(r).dump(2) + "\n");
  if (dump_matrix) {
    ZeroSet zeros = compute_zeros(spec, degree);
    PointSet pts = points_from_zeros(zeros);
    fs::path stem = out.empty() ? fs::path(family + "_N" +
                                           std::to_string(degree))
                                : fs::path(out).replace_extension();
    for (auto prov : {Provenance::Generic, Provenance::Explicit}) {
      PerturbationMatrix m = prov == Provenance::Generic
                                 ? build_generic(spec, pts, degree)
                                 : build_explicit(spec, pts, degree);
      fs::path path = stem;
      path += prov == Provenance::Generic ? "_matrix_generic.csv"
                                          : "_matrix_explicit.csv";
      std::ofstream os(path, std::ios::binary);
      write_matrix_csv(os, m);
    }
  }
  std::cout << "spectrum:";
  for (double v : r.spectrum.theoretical) std::cout << " " << v;
  std::cout << "\n";
  return report_outcome(r);
}

int cmd_sweep(std::vector<std::string> families, bool all,
              const std::string& range, int draws, std::uint64_t seed,
              double tol_eig, double tol_vec, const std::string& out_dir,
              int degree_cap, int workers) {
  SweepOptions opt;
  if (!all) opt.families = std::move(families);
  for (const std::string& f : opt.families) {
    bool known = false;
    for (const FamilyInfo& info : family_catalog()) known |= info.name == f;
    if (!known) throw ParamError("unknown family '" + f + "'");
  }
  auto [lo, hi] = parse_degree_range(range);
  opt.degree_lo = lo;
  opt.degree_hi = hi;
  opt.draws = draws;
  opt.seed = seed;
  opt.tol.eigenvalue = tol_eig;
  opt.tol.collinearity = tol_vec;
  opt.degree_cap = degree_cap;
  opt.workers = workers;
  SweepResult res = run_sweep(opt);
  std::string summary = sweep_summary_json(res, opt).dump(2) + "\n";
  if (!out_dir.empty()) {
    fs::path dir(out_dir);
    fs::create_directories(dir / "runs");
    write_text(dir / "summary.json", summary);
    for (const SweepRun& run : res.runs) {
      if (!run.completed) continue;
      std::string name = run.family + "_N" + std::to_string(run.degree) +
                         "_d" + std::to_string(run.draw) + ".json";
      write_text(dir / "runs" / name,
                 report_to_json(run.report).dump(2) + "\n");
    }
  } else {
    std::cout << summary;
  }
  int failed = 0;
  for (const SweepRun& run : res.runs)
    if (!run.completed || !run.report.overall_pass) ++failed;
  std::cout << res.runs.size() << " runs, " << failed << " failed\n";
  return res.all_pass ? 0 : 1;
}

int cmd_diophantine(const std::string& family, const std::string& params,
                    int degree, int trials, std::uint64_t seed,
                    const std::string& out) {
  FamilySpec spec = resolve_family(family, parse_params(params));
  if (!spec.is_classical())
    throw ParamError(family +
                     ": the point-independence experiment covers hermite, "
                     "laguerre and jacobi only");
  DiophantineReport rep = diophantine_experiment(spec, degree, trials, seed);
  if (!out.empty())
    write_text(out,
               diophantine_to_json(rep, spec, degree, seed).dump(2) + "\n");
  std::cout << "invariant spectrum:";
  for (double v : rep.spectrum) std::cout << " " << v;
  std::cout << "\nmax residual over " << rep.trials
            << " random point sets: " << rep.max_residual << "\n"
            << (rep.pass ? "PASS" : "FAIL") << "\n";
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Perturbation matrices around the zeros of classical orthogonal "
      "polynomials: spectra, eigenvectors, and the identities they satisfy"};
  app.require_subcommand(1);

  std::string family, params, out, range = "2..8";
  double q = 0.0, tol_eig = 1e-7, tol_vec = 1e-6;
  bool doc = false, all = false, dump_matrix = false;
  int degree = 0, draws = 5, trials = 100, degree_cap = 16, workers = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> family_list;

  auto* list = app.add_subcommand("list", "show the family registry");
  list->add_option("--family", family, "detail one family");
  list->add_flag("--doc", doc, "emit the full reference document (markdown)");

  auto* verify = app.add_subcommand(
      "verify", "verify the spectral identities for one parameter set");
  verify->add_option("--family", family)->required();
  verify->add_option("--params", params, "k=v,... (complex as re+imi)");
  verify->add_option("--q", q)->check(CLI::Range(1e-12, 1.0));
  verify->add_option("--N", degree, "polynomial degree")->required();
  verify->add_option("--tol-eig", tol_eig);
  verify->add_option("--tol-vec", tol_vec);
  verify->add_option("--out", out, "write the report JSON here");
  verify->add_flag("--dump-matrix", dump_matrix, "CSV matrix dumps");
  verify->add_option("--max-degree", degree_cap,
                     "lift the default degree cap (warns)");

  auto* sweep = app.add_subcommand(
      "sweep", "randomized verification across families and degrees");
  sweep->add_option("--family", family_list, "comma-separated family list")
      ->delimiter(',');
  sweep->add_flag("--all", all, "every registered family");
  sweep->add_option("--N", range, "degree or range lo..hi (default 2..8)");
  sweep->add_option("--draws", draws, "random parameter draws per cell");
  sweep->add_option("--seed", seed);
  sweep->add_option("--tol-eig", tol_eig);
  sweep->add_option("--tol-vec", tol_vec);
  sweep->add_option("--out", out, "output directory (summary + per-run)");
  sweep->add_option("--max-degree", degree_cap);
  sweep->add_option("--workers", workers, "thread pool size (0 = hardware)");

  auto* dio = app.add_subcommand(
      "diophantine",
      "spectrum invariance of the explicit matrices on random point sets");
  dio->add_option("--family", family)->required();
  dio->add_option("--params", params);
  dio->add_option("--N", degree)->required();
  dio->add_option("--trials", trials);
  dio->add_option("--seed", seed);
  dio->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (degree_cap > 16)
      std::cerr << "warning: degrees beyond 16 leave little double-precision "
                   "headroom for the companion-matrix roots\n";
    if (*list) return cmd_list(family, doc);
    if (*verify)
      return cmd_verify(family, params, q, verify->count("--q") > 0, degree,
                        tol_eig, tol_vec, out, dump_matrix, degree_cap);
    if (*sweep)
      return cmd_sweep(family_list, all || family_list.empty(), range, draws,
                       seed, tol_eig, tol_vec, out, degree_cap, workers);
    if (*dio)
      return cmd_diophantine(family, params, degree, trials, seed, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
