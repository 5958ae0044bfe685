#include "opzero/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opzero/hyper.hpp"

namespace opzero {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPoleTol = 1e-12;
constexpr double kRealTol = 1e-9;

cplx qpow(double q, cplx z) { return std::exp(z * std::log(q)); }

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

cplx ipow(int n) {  // i^n
  switch (((n % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

cplx hf(std::vector<cplx> num, std::vector<cplx> den, cplx z, int n) {
  hyper::SeriesParams p;
  p.numerator = std::move(num);
  p.denominator = std::move(den);
  p.argument = z;
  p.term_count = n;
  return hyper::hyper_F(p);
}

cplx hphi(std::vector<cplx> num, std::vector<cplx> den, cplx z, double q,
          int n) {
  hyper::SeriesParams p;
  p.numerator = std::move(num);
  p.denominator = std::move(den);
  p.argument = z;
  p.q = q;
  p.term_count = n;
  return hyper::hyper_phi(p);
}

[[noreturn]] void fail(const std::string& family, const std::string& msg) {
  throw ParamError(family + ": " + msg);
}

void check(bool ok, const std::string& family, const std::string& msg) {
  if (!ok) fail(family, msg);
}

bool near_real(cplx v) {
  return std::abs(v.imag()) <= kRealTol * (1.0 + std::abs(v));
}

// ---------------------------------------------------------------------------
// parameter access

struct Params {
  const std::string& family;
  std::map<std::string, cplx> values;
  double q = 0;

  cplx get_cplx(const std::string& k) const {
    auto it = values.find(k);
    if (it == values.end()) fail(family, "missing parameter '" + k + "'");
    return it->second;
  }
  double get_real(const std::string& k) const {
    cplx v = get_cplx(k);
    if (!near_real(v))
      fail(family, "parameter '" + k + "' must be real");
    return v.real();
  }
  int get_int(const std::string& k) const {
    double v = get_real(k);
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
      fail(family, "parameter '" + k + "' must be an integer");
    return static_cast<int>(r);
  }
  void expect_exactly(std::vector<std::string> names) const {
    for (const auto& n : names)
      if (!values.count(n)) fail(family, "missing parameter '" + n + "'");
    for (const auto& [k, v] : values)
      if (std::find(names.begin(), names.end(), k) == names.end())
        fail(family, "unexpected parameter '" + k + "'");
  }
};

// Accept aliased spellings: alpha == g - 1/2, beta == h - 1/2.
void apply_alias(std::map<std::string, cplx>& v, const std::string& family,
                 const std::string& alias, const std::string& canon) {
  auto it = v.find(alias);
  if (it == v.end()) return;
  if (v.count(canon))
    fail(family, "give either '" + canon + "' or '" + alias + "', not both");
  v[canon] = it->second + 0.5;
  v.erase(alias);
}

bool conjugate_closed(const std::vector<cplx>& a) {
  std::vector<bool> used(a.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (near_real(a[i])) continue;
    cplx want = std::conj(a[i]);
    bool found = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(a[j] - want) <= 1e-9 * (1.0 + std::abs(want))) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// operator coefficient factories

std::function<cplx(cplx)> wilson_like_V(std::vector<cplx> as, bool reflected) {
  return [as = std::move(as), reflected](cplx x) -> cplx {
    if (reflected) x = -x;
    cplx ix = kI * x;
    cplx d1 = 2.0 * ix, d2 = 2.0 * ix + 1.0;
    if (std::abs(d1) < kPoleTol)
      throw DomainError("operator pole: factor 2ix vanishes");
    if (std::abs(d2) < kPoleTol)
      throw DomainError("operator pole: factor 2ix+1 vanishes");
    cplx num = 1.0;
    for (cplx a : as) num *= a + ix;
    return num / (d1 * d2);
  };
}

std::function<cplx(cplx)> aw_like_V(std::vector<cplx> as, double q,
                                    bool reflected) {
  return [as = std::move(as), q, reflected](cplx x) -> cplx {
    if (reflected) x = -x;
    cplx e = std::exp(kI * x), e2 = e * e;
    cplx d1 = 1.0 - e2, d2 = 1.0 - q * e2;
    if (std::abs(d1) < kPoleTol)
      throw DomainError("operator pole: factor 1-e^{2ix} vanishes");
    if (std::abs(d2) < kPoleTol)
      throw DomainError("operator pole: factor 1-q e^{2ix} vanishes");
    cplx num = 1.0;
    for (cplx a : as) num *= 1.0 - a * e;
    return num / (d1 * d2);
  };
}

cplx checked_ratio(cplx num, cplx den, const char* what) {
  if (std::abs(den) < kPoleTol)
    throw DomainError(std::string("operator pole: ") + what + " vanishes");
  return num / den;
}

// Boundary and positivity checks for real-shift operators. Lattice points
// where the printed rational form is 0/0 (removable for special parameter
// values such as Racah d = 1) are skipped.
void validate_lattice_operator(const FamilySpec& s, const std::string& family) {
  auto safe = [](const std::function<cplx(cplx)>& f, double x) -> cplx {
    try {
      cplx v = f(cplx(x, 0.0));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        return cplx(std::nan(""), 0.0);
      return v;
    } catch (const DomainError&) {
      return cplx(std::nan(""), 0.0);
    }
  };
  int hi = s.lattice_size >= 0 ? s.lattice_size : 40;
  double scale = 1.0;
  for (int x = 0; x <= hi; ++x) {
    cplx b = safe(s.forward_fn, x), d = safe(s.backward_fn, x);
    if (!std::isnan(b.real())) scale = std::max(scale, std::abs(b));
    if (!std::isnan(d.real())) scale = std::max(scale, std::abs(d));
  }
  cplx d0 = safe(s.backward_fn, 0.0);
  if (!std::isnan(d0.real()))
    check(std::abs(d0) <= 1e-9 * scale, family, "D(0) = 0 boundary violated");
  if (s.lattice_size >= 0) {
    cplx bn = safe(s.forward_fn, s.lattice_size);
    if (!std::isnan(bn.real()))
      check(std::abs(bn) <= 1e-9 * scale, family,
            "B(N) = 0 boundary violated");
  }
  for (int x = 0; x <= hi; ++x) {
    cplx b = safe(s.forward_fn, x), d = safe(s.backward_fn, x);
    if (!std::isnan(b.real()))
      check(b.real() >= -1e-9 * scale && std::abs(b.imag()) <= 1e-9 * scale,
            family, "B(x) >= 0 violated on the lattice");
    if (!std::isnan(d.real()))
      check(d.real() >= -1e-9 * scale && std::abs(d.imag()) <= 1e-9 * scale,
            family, "D(x) >= 0 violated on the lattice");
  }
}

void require_q(const ParamSet& p) {
  if (!p.has_q) fail(p.family, "q in (0,1) is required");
  check(p.q > 0.0 && p.q < 1.0, p.family, "q must lie in (0,1)");
}

void forbid_q(const ParamSet& p) {
  if (p.has_q) fail(p.family, "q is not a parameter of this family");
}

FamilySpec base_spec(const ParamSet& p, int degree_cap) {
  FamilySpec s;
  s.name = p.family;
  s.params = p;
  s.max_degree = degree_cap;
  return s;
}

void finish_finite(FamilySpec& s, int lattice) {
  check(lattice >= 2, s.name, "lattice size N must be at least 2");
  s.lattice_size = lattice;
  s.max_degree = std::min(s.max_degree, lattice - 1);
}

// ===========================================================================
// family builders

FamilySpec make_hermite(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({});
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::Differential;
  s.eta_kind = EtaKind::X;
  s.energy_fn = [](int n) { return 2.0 * n; };
  s.drift_fn = [](cplx x) { return 2.0 * x; };
  s.poly_fn = [](int n, cplx x) {
    cplx hm = 0.0, h = 1.0;
    for (int k = 0; k < n; ++k) {
      cplx next = 2.0 * x * h - 2.0 * static_cast<double>(k) * hm;
      hm = h;
      h = next;
    }
    return h;
  };
  s.bracket_fn = [](int n) {
    double L = std::sqrt(2.0 * n + 2.0) + 1.0;
    return std::pair<double, double>(-L, L);
  };
  return s;
}

FamilySpec make_laguerre(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  apply_alias(p.values, p.family, "alpha", "g");
  Params pp{p.family, p.values};
  pp.expect_exactly({"g"});
  double g = pp.get_real("g");
  check(g > -0.5, p.family, "requires g > -1/2 (alpha > -1)");
  double alpha = g - 0.5;
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::Differential;
  s.eta_kind = EtaKind::XSquared;
  s.energy_fn = [](int n) { return 4.0 * n; };
  s.drift_fn = [g](cplx x) {
    return 2.0 * (x - g * checked_ratio(1.0, x, "x (Laguerre drift)"));
  };
  s.poly_fn = [alpha](int n, cplx x) {
    return hyper::pochhammer(alpha + 1.0, n) / factorial(n) *
           hf({cplx(-n)}, {cplx(alpha + 1.0)}, x * x, n);
  };
  s.bracket_fn = [alpha](int n) {
    return std::pair<double, double>(0.0, 4.0 * n + 2.0 * (alpha + 1.0) + 4.0);
  };
  return s;
}

FamilySpec make_jacobi(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  apply_alias(p.values, p.family, "alpha", "g");
  apply_alias(p.values, p.family, "beta", "h");
  Params pp{p.family, p.values};
  pp.expect_exactly({"g", "h"});
  double g = pp.get_real("g"), h = pp.get_real("h");
  check(g > -0.5, p.family, "requires g > -1/2 (alpha > -1)");
  check(h > -0.5, p.family, "requires h > -1/2 (beta > -1)");
  double alpha = g - 0.5, beta = h - 0.5;
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::Differential;
  s.eta_kind = EtaKind::Cos2X;
  s.energy_fn = [g, h](int n) { return 4.0 * n * (n + g + h); };
  s.drift_fn = [g, h](cplx x) {
    cplx sx = std::sin(x), cx = std::cos(x);
    return -2.0 * (g * checked_ratio(cx, sx, "sin x (Jacobi drift)") -
                   h * checked_ratio(sx, cx, "cos x (Jacobi drift)"));
  };
  s.poly_fn = [alpha, beta](int n, cplx x) {
    cplx y = std::cos(2.0 * x);
    return hyper::pochhammer(alpha + 1.0, n) / factorial(n) *
           hf({cplx(-n), cplx(n + alpha + beta + 1.0)}, {cplx(alpha + 1.0)},
              0.5 * (1.0 - y), n);
  };
  s.bracket_fn = [](int) { return std::pair<double, double>(-1.0, 1.0); };
  s.bracket_exact = true;
  return s;
}

FamilySpec make_continuous_hahn(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"a1", "a2", "a3", "a4"});
  cplx a1 = pp.get_cplx("a1"), a2 = pp.get_cplx("a2");
  cplx a3 = pp.get_cplx("a3"), a4 = pp.get_cplx("a4");
  for (cplx a : {a1, a2, a3, a4})
    check(a.real() > 0.0, p.family, "requires Re a_j > 0");
  auto near = [](cplx u, cplx v) {
    return std::abs(u - v) <= 1e-9 * (1.0 + std::abs(v));
  };
  bool set_ok = (near(a3, std::conj(a1)) && near(a4, std::conj(a2))) ||
                (near(a3, std::conj(a2)) && near(a4, std::conj(a1)));
  check(set_ok, p.family, "requires {a3,a4} = {conj a1, conj a2} as a set");
  cplx b1c = a1 + a2 + a3 + a4;
  check(near_real(b1c), p.family, "a1+a2+a3+a4 must be real");
  double b1 = b1c.real();
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::ImaginaryShift;
  s.shift_scale = 1.0;
  s.eta_kind = EtaKind::X;
  s.energy_fn = [b1](int n) { return n * (n + b1 - 1.0); };
  s.forward_fn = [a1, a2](cplx x) { return (a1 + kI * x) * (a2 + kI * x); };
  s.backward_fn = [a3, a4](cplx x) { return (a3 - kI * x) * (a4 - kI * x); };
  s.poly_fn = [a1, a3, a4, b1](int n, cplx x) {
    return ipow(n) * hyper::pochhammer(a1 + a3, n) *
           hyper::pochhammer(a1 + a4, n) / factorial(n) *
           hf({cplx(-n), cplx(n + b1 - 1.0), a1 + kI * x},
              {a1 + a3, a1 + a4}, 1.0, n);
  };
  double reach = std::abs(a1) + std::abs(a2) + std::abs(a3) + std::abs(a4);
  s.bracket_fn = [reach](int n) {
    double L = n + reach + 3.0;
    return std::pair<double, double>(-L, L);
  };
  return s;
}

FamilySpec make_meixner_pollaczek(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "phi"});
  double a = pp.get_real("a"), phi = pp.get_real("phi");
  check(a > 0.0, p.family, "requires a > 0");
  check(phi > 0.0 && phi < M_PI, p.family, "requires 0 < phi < pi");
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::ImaginaryShift;
  s.shift_scale = 1.0;
  s.eta_kind = EtaKind::X;
  s.energy_fn = [phi](int n) { return 2.0 * n * std::sin(phi); };
  cplx w = std::exp(kI * (M_PI / 2.0 - phi));
  s.forward_fn = [a, w](cplx x) { return w * (a + kI * x); };
  s.backward_fn = [a, w](cplx x) { return (a - kI * x) / w; };
  s.poly_fn = [a, phi](int n, cplx x) {
    return hyper::pochhammer(2.0 * a, n) / factorial(n) *
           std::exp(kI * (static_cast<double>(n) * phi)) *
           hf({cplx(-n), a + kI * x}, {cplx(2.0 * a)},
              1.0 - std::exp(-2.0 * kI * phi), n);
  };
  s.bracket_fn = [a, phi](int n) {
    double L = (n + a + 4.0) / std::sin(phi);
    return std::pair<double, double>(-L, L);
  };
  return s;
}

FamilySpec make_wilson_like(const ParamSet& p0, int cap, int nparams) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  std::vector<std::string> names;
  for (int j = 1; j <= nparams; ++j) names.push_back("a" + std::to_string(j));
  pp.expect_exactly(names);
  std::vector<cplx> a;
  for (const auto& n : names) a.push_back(pp.get_cplx(n));
  for (cplx v : a) check(v.real() > 0.0, p.family, "requires Re a_j > 0");
  check(conjugate_closed(a), p.family,
        "parameter set must be closed under conjugation");
  double b1 = 0.0;
  for (cplx v : a) b1 += v.real();
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::ImaginaryShift;
  s.shift_scale = 1.0;
  s.eta_kind = EtaKind::XSquared;
  if (nparams == 4)
    s.energy_fn = [b1](int n) { return n * (n + b1 - 1.0); };
  else
    s.energy_fn = [](int n) { return static_cast<double>(n); };
  s.forward_fn = wilson_like_V(a, false);
  s.backward_fn = wilson_like_V(a, true);
  if (nparams == 4) {
    s.poly_fn = [a, b1](int n, cplx x) {
      return hyper::pochhammer(a[0] + a[1], n) *
             hyper::pochhammer(a[0] + a[2], n) *
             hyper::pochhammer(a[0] + a[3], n) *
             hf({cplx(-n), cplx(n + b1 - 1.0), a[0] + kI * x, a[0] - kI * x},
                {a[0] + a[1], a[0] + a[2], a[0] + a[3]}, 1.0, n);
    };
  } else {
    s.poly_fn = [a](int n, cplx x) {
      return hyper::pochhammer(a[0] + a[1], n) *
             hyper::pochhammer(a[0] + a[2], n) *
             hf({cplx(-n), a[0] + kI * x, a[0] - kI * x},
                {a[0] + a[1], a[0] + a[2]}, 1.0, n);
    };
  }
  double reach = 0.0;
  for (cplx v : a) reach += std::abs(v);
  s.bracket_fn = [reach](int n) {
    double L = n + reach + 3.0;
    return std::pair<double, double>(0.0, L * L);
  };
  return s;
}

// Shared scaffold of the eta = cos x group.
FamilySpec cosx_spec(const ParamSet& p, int cap, std::vector<cplx> vfactors) {
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::ImaginaryShift;
  s.shift_scale = std::log(p.q);
  s.eta_kind = EtaKind::CosX;
  s.forward_fn = aw_like_V(vfactors, p.q, false);
  s.backward_fn = aw_like_V(vfactors, p.q, true);
  s.bracket_fn = [](int) { return std::pair<double, double>(-1.0, 1.0); };
  s.bracket_exact = true;
  return s;
}

FamilySpec make_aw_like(const ParamSet& p0, int cap, int nparams) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  std::vector<std::string> names;
  for (int j = 1; j <= nparams; ++j) names.push_back("a" + std::to_string(j));
  pp.expect_exactly(names);
  std::vector<cplx> a;
  for (const auto& n : names) a.push_back(pp.get_cplx(n));
  for (cplx v : a) check(std::abs(v) < 1.0, p.family, "requires |a_j| < 1");
  check(std::abs(a[0]) > 1e-12, p.family,
        "a1 must be nonzero (it normalizes the polynomial)");
  check(conjugate_closed(a), p.family,
        "parameter set must be closed under conjugation");
  FamilySpec s = cosx_spec(p, cap, a);
  if (nparams == 4) {
    cplx b4c = a[0] * a[1] * a[2] * a[3];
    check(near_real(b4c), p.family, "a1 a2 a3 a4 must be real");
    double b4 = b4c.real();
    s.energy_fn = [q, b4](int n) {
      return (std::pow(q, -n) - 1.0) * (1.0 - b4 * std::pow(q, n - 1));
    };
  } else {
    s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  }
  s.poly_fn = [a, q, nparams](int n, cplx x) {
    cplx e = std::exp(kI * x);
    cplx pre = std::pow(a[0], -n);
    std::vector<cplx> num{qpow(q, -n)};
    std::vector<cplx> den;
    if (nparams == 4) {
      cplx b4 = a[0] * a[1] * a[2] * a[3];
      num.push_back(b4 * std::pow(q, n - 1));
    }
    num.push_back(a[0] * e);
    num.push_back(a[0] / e);
    for (int j = 1; j < nparams; ++j) {
      cplx prod = a[0] * a[j];
      pre *= hyper::q_pochhammer(prod, q, n);
      den.push_back(prod);
    }
    while (den.size() + 1 < num.size()) den.push_back(0.0);
    return pre * hphi(num, den, q, q, n);
  };
  return s;
}

FamilySpec make_continuous_big_q_hermite(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a"});
  double a = pp.get_real("a");
  check(a > -1.0 && a < 1.0, p.family, "requires -1 < a < 1");
  check(std::abs(a) > 1e-12, p.family,
        "a must be nonzero (it normalizes the polynomial)");
  FamilySpec s = cosx_spec(p, cap, {cplx(a)});
  s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  s.poly_fn = [a, q](int n, cplx x) {
    cplx e = std::exp(kI * x);
    return std::pow(cplx(a), -n) *
           hphi({qpow(q, -n), a * e, a / e}, {0.0, 0.0}, q, q, n);
  };
  return s;
}

FamilySpec make_continuous_q_hermite(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({});
  FamilySpec s = cosx_spec(p, cap, {});
  s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  s.poly_fn = [q](int n, cplx x) {
    cplx e = std::exp(kI * x);
    return std::pow(e, n) *
           hphi({qpow(q, -n), 0.0}, {}, std::pow(q, n) / (e * e), q, n);
  };
  return s;
}

FamilySpec make_continuous_q_jacobi(const ParamSet& p0, int cap, bool laguerre) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  if (laguerre)
    pp.expect_exactly({"alpha"});
  else
    pp.expect_exactly({"alpha", "beta"});
  double alpha = pp.get_real("alpha");
  check(alpha >= -0.5, p.family, "requires alpha >= -1/2");
  double beta = 0.0;
  if (!laguerre) {
    beta = pp.get_real("beta");
    check(beta >= -0.5, p.family, "requires beta >= -1/2");
  }
  double qa = std::pow(q, 0.5 * (alpha + 0.5));
  double sq = std::sqrt(q);
  std::vector<cplx> vf{qa, qa * sq};
  if (!laguerre) {
    double qb = std::pow(q, 0.5 * (beta + 0.5));
    vf.push_back(-qb);
    vf.push_back(-qb * sq);
  }
  FamilySpec s = cosx_spec(p, cap, vf);
  if (laguerre)
    s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  else
    s.energy_fn = [q, alpha, beta](int n) {
      return (std::pow(q, -n) - 1.0) *
             (1.0 - std::pow(q, n + alpha + beta + 1.0));
    };
  s.poly_fn = [q, qa, alpha, beta, laguerre](int n, cplx x) {
    cplx e = std::exp(kI * x);
    cplx pre = hyper::q_pochhammer(std::pow(q, alpha + 1.0), q, n) /
               hyper::q_pochhammer(q, q, n);
    if (laguerre) {
      return pre * hphi({qpow(q, -n), qa * e, qa / e},
                        {std::pow(q, alpha + 1.0), 0.0}, q, q, n);
    }
    return pre * hphi({qpow(q, -n), std::pow(q, n + alpha + beta + 1.0),
                       qa * e, qa / e},
                      {std::pow(q, alpha + 1.0),
                       -std::pow(q, 0.5 * (alpha + beta + 1.0)),
                       -std::pow(q, 0.5 * (alpha + beta + 2.0))},
                      q, q, n);
  };
  return s;
}

FamilySpec make_hahn(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b", "N"});
  double a = pp.get_real("a"), b = pp.get_real("b");
  int N = pp.get_int("N");
  check(a > 0.0, p.family, "requires a > 0");
  check(b > 0.0, p.family, "requires b > 0");
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::X;
  finish_finite(s, N);
  s.energy_fn = [a, b](int n) { return n * (n + a + b - 1.0); };
  s.forward_fn = [a, N](cplx x) { return (x + a) * (cplx(N) - x); };
  s.backward_fn = [b, N](cplx x) { return x * (b + cplx(N) - x); };
  s.poly_fn = [a, b, N](int n, cplx x) {
    return hf({cplx(-n), cplx(n + a + b - 1.0), -x}, {cplx(a), cplx(-N)}, 1.0,
              n);
  };
  s.bracket_fn = [N](int) { return std::pair<double, double>(0.0, N); };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_krawtchouk(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"p", "N"});
  double pr = pp.get_real("p");
  int N = pp.get_int("N");
  check(pr > 0.0 && pr < 1.0, p.family, "requires 0 < p < 1");
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::X;
  finish_finite(s, N);
  s.energy_fn = [](int n) { return static_cast<double>(n); };
  s.forward_fn = [pr, N](cplx x) { return pr * (cplx(N) - x); };
  s.backward_fn = [pr](cplx x) { return (1.0 - pr) * x; };
  s.poly_fn = [pr, N](int n, cplx x) {
    return hf({cplx(-n), -x}, {cplx(-N)}, 1.0 / pr, n);
  };
  s.bracket_fn = [N](int) { return std::pair<double, double>(0.0, N); };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_meixner(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"beta", "c"});
  double beta = pp.get_real("beta"), c = pp.get_real("c");
  check(beta > 0.0, p.family, "requires beta > 0");
  check(c > 0.0 && c < 1.0, p.family, "requires 0 < c < 1");
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::X;
  s.semi_infinite_lattice = true;
  s.energy_fn = [](int n) { return static_cast<double>(n); };
  s.forward_fn = [beta, c](cplx x) { return c / (1.0 - c) * (x + beta); };
  s.backward_fn = [c](cplx x) { return x / (1.0 - c); };
  s.poly_fn = [beta, c](int n, cplx x) {
    return hf({cplx(-n), -x}, {cplx(beta)}, 1.0 - 1.0 / c, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_charlier(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"a"});
  double a = pp.get_real("a");
  check(a > 0.0, p.family, "requires a > 0");
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::X;
  s.semi_infinite_lattice = true;
  s.energy_fn = [](int n) { return static_cast<double>(n); };
  s.forward_fn = [a](cplx) { return cplx(a); };
  s.backward_fn = [](cplx x) { return x; };
  s.poly_fn = [a](int n, cplx x) {
    return hf({cplx(-n), -x}, {}, -1.0 / a, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_racah(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b", "d", "N"});
  double a = pp.get_real("a"), b = pp.get_real("b"), d = pp.get_real("d");
  int N = pp.get_int("N");
  double c = -static_cast<double>(N);
  check(d > 0.0, p.family, "requires d > 0");
  check(a > N + d, p.family, "requires a > N + d");
  check(b > 0.0 && b < 1.0 + d, p.family, "requires 0 < b < 1 + d");
  double dt = a + b + c - d - 1.0;
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::Quadratic;
  s.eta_c = d;
  finish_finite(s, N);
  s.energy_fn = [dt](int n) { return n * (n + dt); };
  s.forward_fn = [a, b, c, d](cplx x) {
    return -(x + a) * (x + b) * (x + c) * (x + d) /
           ((2.0 * x + d) * (2.0 * x + 1.0 + d));
  };
  s.backward_fn = [a, b, c, d](cplx x) {
    return -(x + d - a) * (x + d - b) * (x + d - c) * x /
           ((2.0 * x - 1.0 + d) * (2.0 * x + d));
  };
  s.poly_fn = [a, b, c, d, dt](int n, cplx x) {
    return hf({cplx(-n), cplx(n + dt), -x, x + d}, {cplx(a), cplx(b), cplx(c)},
              1.0, n);
  };
  s.bracket_fn = [N, d](int) {
    return std::pair<double, double>(0.0, N * (N + d));
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_dual_hahn(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  forbid_q(p);
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b", "N"});
  double a = pp.get_real("a"), b = pp.get_real("b");
  int N = pp.get_int("N");
  check(a > 0.0, p.family, "requires a > 0");
  check(b > 0.0, p.family, "requires b > 0");
  double ab1 = a + b - 1.0;
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::Quadratic;
  s.eta_c = ab1;
  finish_finite(s, N);
  s.energy_fn = [](int n) { return static_cast<double>(n); };
  s.forward_fn = [a, b, N](cplx x) {
    return (x + a) * (x + a + b - 1.0) * (cplx(N) - x) /
           ((2.0 * x - 1.0 + a + b) * (2.0 * x + a + b));
  };
  s.backward_fn = [a, b, N](cplx x) {
    return x * (x + b - 1.0) * (x + a + b + cplx(N) - 1.0) /
           ((2.0 * x - 2.0 + a + b) * (2.0 * x - 1.0 + a + b));
  };
  s.poly_fn = [a, b, N](int n, cplx x) {
    return hf({cplx(-n), x + a + b - 1.0, -x}, {cplx(a), cplx(-N)}, 1.0, n);
  };
  s.bracket_fn = [N, ab1](int) {
    return std::pair<double, double>(0.0, N * (N + ab1));
  };
  validate_lattice_operator(s, p.family);
  return s;
}

// Shared scaffold of the eta = q^{-x} - 1 group.
FamilySpec qinv_spec(const ParamSet& p, int cap) {
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::QInverse;
  return s;
}

std::function<std::pair<double, double>(int)> qinv_bracket(double q, int N) {
  return [q, N](int) {
    return std::pair<double, double>(0.0, std::pow(q, -N) - 1.0);
  };
}

FamilySpec make_q_hahn(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b", "N"});
  double a = pp.get_real("a"), b = pp.get_real("b");
  int N = pp.get_int("N");
  check(a > 0.0 && a < 1.0, p.family, "requires 0 < a < 1");
  check(b > 0.0 && b < 1.0, p.family, "requires 0 < b < 1");
  FamilySpec s = qinv_spec(p, cap);
  finish_finite(s, N);
  s.energy_fn = [q, a, b](int n) {
    return (std::pow(q, -n) - 1.0) * (1.0 - a * b * std::pow(q, n - 1));
  };
  s.forward_fn = [q, a, N](cplx x) {
    return (1.0 - a * qpow(q, x)) * (qpow(q, x - cplx(N)) - 1.0);
  };
  s.backward_fn = [q, a, b, N](cplx x) {
    return a / q * (1.0 - qpow(q, x)) * (qpow(q, x - cplx(N)) - b);
  };
  s.poly_fn = [q, a, b, N](int n, cplx x) {
    return hphi({qpow(q, -n), a * b * std::pow(q, n - 1), qpow(q, -x)},
                {cplx(a), std::pow(q, -N)}, q, q, n);
  };
  s.bracket_fn = qinv_bracket(q, N);
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_quantum_q_krawtchouk(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"p", "N"});
  double pr = pp.get_real("p");
  int N = pp.get_int("N");
  check(pr > std::pow(q, -N), p.family, "requires p > q^{-N}");
  FamilySpec s = qinv_spec(p, cap);
  finish_finite(s, N);
  s.energy_fn = [q](int n) { return 1.0 - std::pow(q, n); };
  s.forward_fn = [q, pr, N](cplx x) {
    return qpow(q, x) / pr * (qpow(q, x - cplx(N)) - 1.0);
  };
  s.backward_fn = [q, pr, N](cplx x) {
    return (1.0 - qpow(q, x)) * (1.0 - qpow(q, x - cplx(N + 1)) / pr);
  };
  s.poly_fn = [q, pr, N](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x)}, {std::pow(q, -N)},
                pr * std::pow(q, n + 1), q, n);
  };
  s.bracket_fn = qinv_bracket(q, N);
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_q_krawtchouk(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"p", "N"});
  double pr = pp.get_real("p");
  int N = pp.get_int("N");
  check(pr > 0.0, p.family, "requires p > 0");
  FamilySpec s = qinv_spec(p, cap);
  finish_finite(s, N);
  s.energy_fn = [q, pr](int n) {
    return (std::pow(q, -n) - 1.0) * (1.0 + pr * std::pow(q, n));
  };
  s.forward_fn = [q, N](cplx x) { return qpow(q, x - cplx(N)) - 1.0; };
  s.backward_fn = [q, pr](cplx x) { return pr * (1.0 - qpow(q, x)); };
  s.poly_fn = [q, pr, N](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x), -pr * std::pow(q, n)},
                {std::pow(q, -N), 0.0}, q, q, n);
  };
  s.bracket_fn = qinv_bracket(q, N);
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_affine_q_krawtchouk(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"p", "N"});
  double pr = pp.get_real("p");
  int N = pp.get_int("N");
  check(pr > 0.0 && pr < 1.0 / q, p.family, "requires 0 < p < q^{-1}");
  FamilySpec s = qinv_spec(p, cap);
  finish_finite(s, N);
  s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  s.forward_fn = [q, pr, N](cplx x) {
    return (qpow(q, x - cplx(N)) - 1.0) * (1.0 - pr * qpow(q, x + 1.0));
  };
  s.backward_fn = [q, pr, N](cplx x) {
    return pr * qpow(q, x - cplx(N)) * (1.0 - qpow(q, x));
  };
  s.poly_fn = [q, pr, N](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x), 0.0},
                {cplx(pr * q), std::pow(q, -N)}, q, q, n);
  };
  s.bracket_fn = qinv_bracket(q, N);
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_q_meixner(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"b", "c"});
  double b = pp.get_real("b"), c = pp.get_real("c");
  check(b > 0.0 && b < 1.0 / q, p.family, "requires 0 < b < q^{-1}");
  check(c > 0.0, p.family, "requires c > 0");
  FamilySpec s = qinv_spec(p, cap);
  s.semi_infinite_lattice = true;
  s.energy_fn = [q](int n) { return 1.0 - std::pow(q, n); };
  s.forward_fn = [q, b, c](cplx x) {
    return c * qpow(q, x) * (1.0 - b * qpow(q, x + 1.0));
  };
  s.backward_fn = [q, b, c](cplx x) {
    return (1.0 - qpow(q, x)) * (1.0 + b * c * qpow(q, x));
  };
  s.poly_fn = [q, b, c](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x)}, {cplx(b * q)},
                -std::pow(q, n + 1) / c, q, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_al_salam_carlitz_2(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a"});
  double a = pp.get_real("a");
  check(a > 0.0 && a < 1.0 / q, p.family, "requires 0 < a < q^{-1}");
  FamilySpec s = qinv_spec(p, cap);
  s.semi_infinite_lattice = true;
  s.energy_fn = [q](int n) { return 1.0 - std::pow(q, n); };
  s.forward_fn = [q, a](cplx x) { return a * qpow(q, 2.0 * x + 1.0); };
  s.backward_fn = [q, a](cplx x) {
    return (1.0 - qpow(q, x)) * (1.0 - a * qpow(q, x));
  };
  s.poly_fn = [q, a](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x)}, {}, std::pow(q, n) / a, q, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_q_charlier(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a"});
  double a = pp.get_real("a");
  check(a > 0.0, p.family, "requires a > 0");
  FamilySpec s = qinv_spec(p, cap);
  s.semi_infinite_lattice = true;
  s.energy_fn = [q](int n) { return 1.0 - std::pow(q, n); };
  s.forward_fn = [q, a](cplx x) { return a * qpow(q, x); };
  s.backward_fn = [q](cplx x) { return 1.0 - qpow(q, x); };
  s.poly_fn = [q, a](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x)}, {0.0}, -std::pow(q, n + 1) / a, q,
                n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

// Shared scaffold of the eta = 1 - q^x group (semi-infinite lattices).
FamilySpec qpow_spec(const ParamSet& p, int cap) {
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::QPower;
  s.semi_infinite_lattice = true;
  s.bracket_fn = [](int) { return std::pair<double, double>(0.0, 1.0); };
  s.bracket_exact = true;
  return s;
}

FamilySpec make_little_q_jacobi(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b"});
  double a = pp.get_real("a"), b = pp.get_real("b");
  check(a > 0.0 && a < 1.0 / q, p.family, "requires 0 < a < q^{-1}");
  check(b > 0.0 && b < 1.0 / q, p.family, "requires 0 < b < q^{-1}");
  FamilySpec s = qpow_spec(p, cap);
  s.energy_fn = [q, a, b](int n) {
    return (std::pow(q, -n) - 1.0) * (1.0 - a * b * std::pow(q, n + 1));
  };
  s.forward_fn = [q, a, b](cplx x) { return a * (qpow(q, -x) - b * q); };
  s.backward_fn = [q](cplx x) { return qpow(q, -x) - 1.0; };
  s.poly_fn = [q, a, b](int n, cplx x) {
    cplx pre = std::pow(cplx(-a), -n) *
               std::pow(q, -0.5 * n * (n + 1.0)) *
               hyper::q_pochhammer(a * q, q, n) /
               hyper::q_pochhammer(b * q, q, n);
    return pre * hphi({qpow(q, -n), a * b * std::pow(q, n + 1)},
                      {cplx(a * q)}, qpow(q, x + 1.0), q, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_little_q_laguerre(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a"});
  double a = pp.get_real("a");
  check(a > 0.0 && a < 1.0 / q, p.family, "requires 0 < a < q^{-1}");
  FamilySpec s = qpow_spec(p, cap);
  s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  s.forward_fn = [q, a](cplx x) { return a * qpow(q, -x); };
  s.backward_fn = [q](cplx x) { return qpow(q, -x) - 1.0; };
  s.poly_fn = [q, a](int n, cplx x) {
    return hphi({qpow(q, -n), qpow(q, -x)}, {}, qpow(q, x) / a, q, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_alternative_q_charlier(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a"});
  double a = pp.get_real("a");
  check(a > 0.0, p.family, "requires a > 0");
  FamilySpec s = qpow_spec(p, cap);
  s.energy_fn = [q, a](int n) {
    return (std::pow(q, -n) - 1.0) * (1.0 + a * std::pow(q, n));
  };
  s.forward_fn = [a](cplx) { return cplx(a); };
  s.backward_fn = [q](cplx x) { return qpow(q, -x) - 1.0; };
  s.poly_fn = [q, a](int n, cplx x) {
    return qpow(q, static_cast<double>(n) * x) *
           hphi({qpow(q, -n), qpow(q, -x)}, {0.0},
                -std::pow(q, 1 - n) / a, q, n);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_q_racah(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b", "d", "N"});
  double a = pp.get_real("a"), b = pp.get_real("b"), d = pp.get_real("d");
  int N = pp.get_int("N");
  double c = std::pow(q, -N);
  check(d > 0.0 && d < 1.0, p.family, "requires 0 < d < 1");
  check(a > 0.0 && a < std::pow(q, N) * d, p.family,
        "requires 0 < a < q^N d");
  check(b > q * d && b < 1.0, p.family, "requires q d < b < 1");
  double dt = a * b * c / (d * q);
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::QBilinear;
  s.eta_c = d;
  finish_finite(s, N);
  s.energy_fn = [q, dt](int n) {
    return (std::pow(q, -n) - 1.0) * (1.0 - dt * std::pow(q, n));
  };
  s.forward_fn = [q, a, b, c, d](cplx x) {
    cplx u = qpow(q, x);
    return -(1.0 - a * u) * (1.0 - b * u) * (1.0 - c * u) * (1.0 - d * u) /
           ((1.0 - d * u * u) * (1.0 - d * q * u * u));
  };
  s.backward_fn = [q, a, b, c, d, dt](cplx x) {
    cplx u = qpow(q, x);
    return -dt * (1.0 - d * u / a) * (1.0 - d * u / b) * (1.0 - d * u / c) *
           (1.0 - u) / ((1.0 - d * u * u / q) * (1.0 - d * u * u));
  };
  s.poly_fn = [q, a, b, c, d, dt](int n, cplx x) {
    return hphi({qpow(q, -n), dt * std::pow(q, n), qpow(q, -x),
                 d * qpow(q, x)},
                {cplx(a), cplx(b), cplx(c)}, q, q, n);
  };
  s.bracket_fn = [q, d, N](int) {
    double top = (std::pow(q, -N) - 1.0) * (1.0 - d * std::pow(q, N));
    return std::pair<double, double>(0.0, top);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

FamilySpec make_dual_q_hahn(const ParamSet& p0, int cap) {
  ParamSet p = p0;
  require_q(p);
  const double q = p.q;
  Params pp{p.family, p.values};
  pp.expect_exactly({"a", "b", "N"});
  double a = pp.get_real("a"), b = pp.get_real("b");
  int N = pp.get_int("N");
  check(a > 0.0 && a < 1.0, p.family, "requires 0 < a < 1");
  check(b > 0.0 && b < 1.0, p.family, "requires 0 < b < 1");
  FamilySpec s = base_spec(p, cap);
  s.op_kind = OperatorKind::RealShift;
  s.eta_kind = EtaKind::QBilinear;
  s.eta_c = a * b / q;
  finish_finite(s, N);
  s.energy_fn = [q](int n) { return std::pow(q, -n) - 1.0; };
  s.forward_fn = [q, a, b, N](cplx x) {
    cplx u = qpow(q, x);
    cplx ab = a * b;
    return (qpow(q, x - cplx(N)) - 1.0) * (1.0 - a * u) * (1.0 - ab * u / q) /
           ((1.0 - ab * u * u / q) * (1.0 - ab * u * u));
  };
  s.backward_fn = [q, a, b, N](cplx x) {
    cplx u = qpow(q, x);
    cplx ab = a * b;
    return a * qpow(q, x - cplx(N + 1)) * (1.0 - u) *
           (1.0 - ab * u * std::pow(q, N - 1)) * (1.0 - b * u / q) /
           ((1.0 - ab * u * u / (q * q)) * (1.0 - ab * u * u / q));
  };
  s.poly_fn = [q, a, b, N](int n, cplx x) {
    return hphi({qpow(q, -n), a * b * qpow(q, x - 1.0), qpow(q, -x)},
                {cplx(a), std::pow(q, -N)}, q, q, n);
  };
  double A = a * b / q;
  s.bracket_fn = [q, A, N](int) {
    double top = (std::pow(q, -N) - 1.0) * (1.0 - A * std::pow(q, N));
    return std::pair<double, double>(0.0, top);
  };
  validate_lattice_operator(s, p.family);
  return s;
}

// ===========================================================================
// registry

struct Entry {
  FamilyInfo info;
  std::function<FamilySpec(const ParamSet&, int)> build;
  std::function<void(ParamSet&, int, Rng&)> draw;
};

void draw_conjugate_pairs(ParamSet& p, int count, Rng& rng, double lo,
                          double hi, double imax, bool unit_disc) {
  // Draw a conjugation-closed tuple: each step adds either a real value or a
  // conjugate pair.
  std::vector<cplx> vals;
  while (static_cast<int>(vals.size()) < count) {
    bool pair = (count - static_cast<int>(vals.size()) >= 2) && rng.coin();
    if (pair) {
      double re = rng.uniform(lo, hi);
      double im = rng.uniform(0.1 * imax, imax);
      if (unit_disc) {
        double r = std::hypot(re, im);
        if (r >= 0.93) {
          double sc = 0.9 / r;
          re *= sc;
          im *= sc;
        }
      }
      vals.emplace_back(re, im);
      vals.emplace_back(re, -im);
    } else {
      vals.emplace_back(rng.uniform(lo, hi), 0.0);
    }
  }
  for (int j = 0; j < count; ++j)
    p.values["a" + std::to_string(j + 1)] = vals[j];
}

double draw_q(Rng& rng) { return rng.uniform(0.55, 0.95); }

int draw_lattice(int degree, Rng& rng) {
  return degree + 1 + rng.uniform_int(1, 4);
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    auto add = [&t](FamilyInfo info,
                    std::function<FamilySpec(const ParamSet&, int)> build,
                    std::function<void(ParamSet&, int, Rng&)> draw) {
      t.push_back({std::move(info), std::move(build), std::move(draw)});
    };

    add({"hermite", false, OperatorKind::Differential, {},
         "eta(x) = x on (-inf, inf)", "E(n) = 2n",
         "-d^2/dx^2 + 2x d/dx", "H_n(x), three-term recurrence"},
        make_hermite, [](ParamSet&, int, Rng&) {});

    add({"laguerre", false, OperatorKind::Differential,
         {{"g", "g > -1/2 (alias alpha = g - 1/2)"}},
         "eta(x) = x^2 on (0, inf)", "E(n) = 4n",
         "-d^2/dx^2 + 2(x - g/x) d/dx",
         "L_n^{(alpha)}(eta) = (alpha+1)_n/n! 1F1(-n; alpha+1; eta)"},
        make_laguerre, [](ParamSet& p, int, Rng& rng) {
          p.values["g"] = rng.uniform(-0.45, 4.0);
        });

    add({"jacobi", false, OperatorKind::Differential,
         {{"g", "g > -1/2 (alias alpha)"}, {"h", "h > -1/2 (alias beta)"}},
         "eta(x) = cos 2x on (0, pi/2)", "E(n) = 4n(n+g+h)",
         "-d^2/dx^2 - 2(g cot x - h tan x) d/dx",
         "P_n^{(alpha,beta)}(eta) = (alpha+1)_n/n! "
         "2F1(-n, n+alpha+beta+1; alpha+1; (1-eta)/2)"},
        make_jacobi, [](ParamSet& p, int, Rng& rng) {
          p.values["g"] = rng.uniform(-0.45, 4.0);
          p.values["h"] = rng.uniform(-0.45, 4.0);
        });

    add({"continuous_hahn", false, OperatorKind::ImaginaryShift,
         {{"a1", "Re a1 > 0", true},
          {"a2", "Re a2 > 0", true},
          {"a3", "{a3,a4} = {conj a1, conj a2}", true},
          {"a4", "{a3,a4} = {conj a1, conj a2}", true}},
         "eta(x) = x on (-inf, inf)", "E(n) = n(n + a1+a2+a3+a4 - 1)",
         "V(x) = (a1+ix)(a2+ix), V*(x) = (a3-ix)(a4-ix), shift x -> x -/+ i",
         "i^n (a1+a3)_n (a1+a4)_n/n! 3F2(-n, n+b1-1, a1+ix; a1+a3, a1+a4; 1)"},
        make_continuous_hahn, [](ParamSet& p, int, Rng& rng) {
          cplx a1(rng.uniform(0.15, 2.0), rng.uniform(-1.4, 1.4));
          cplx a2(rng.uniform(0.15, 2.0), rng.uniform(-1.4, 1.4));
          p.values["a1"] = a1;
          p.values["a2"] = a2;
          p.values["a3"] = std::conj(a1);
          p.values["a4"] = std::conj(a2);
        });

    add({"meixner_pollaczek", false, OperatorKind::ImaginaryShift,
         {{"a", "a > 0"}, {"phi", "0 < phi < pi"}},
         "eta(x) = x on (-inf, inf)", "E(n) = 2n sin(phi)",
         "V(x) = e^{i(pi/2-phi)}(a+ix), shift x -> x -/+ i",
         "(2a)_n/n! e^{i n phi} 2F1(-n, a+ix; 2a; 1-e^{-2 i phi})"},
        make_meixner_pollaczek, [](ParamSet& p, int, Rng& rng) {
          p.values["a"] = rng.uniform(0.2, 2.5);
          p.values["phi"] = rng.uniform(0.25, M_PI - 0.25);
        });

    add({"wilson", false, OperatorKind::ImaginaryShift,
         {{"a1", "Re a_j > 0, set closed under conjugation", true},
          {"a2", "", true},
          {"a3", "", true},
          {"a4", "", true}},
         "eta(x) = x^2 on (0, inf)", "E(n) = n(n + a1+a2+a3+a4 - 1)",
         "V(x) = prod_j (a_j + ix) / (2ix (2ix+1)), V*(x) = V(-x)",
         "(a1+a2)_n (a1+a3)_n (a1+a4)_n "
         "4F3(-n, n+b1-1, a1+ix, a1-ix; a1+a2, a1+a3, a1+a4; 1)"},
        [](const ParamSet& p, int cap) { return make_wilson_like(p, cap, 4); },
        [](ParamSet& p, int, Rng& rng) {
          draw_conjugate_pairs(p, 4, rng, 0.15, 1.8, 1.2, false);
        });

    add({"continuous_dual_hahn", false, OperatorKind::ImaginaryShift,
         {{"a1", "Re a_j > 0, set closed under conjugation", true},
          {"a2", "", true},
          {"a3", "", true}},
         "eta(x) = x^2 on (0, inf)", "E(n) = n",
         "V(x) = prod_j (a_j + ix) / (2ix (2ix+1)), V*(x) = V(-x)",
         "(a1+a2)_n (a1+a3)_n 3F2(-n, a1+ix, a1-ix; a1+a2, a1+a3; 1)"},
        [](const ParamSet& p, int cap) { return make_wilson_like(p, cap, 3); },
        [](ParamSet& p, int, Rng& rng) {
          draw_conjugate_pairs(p, 3, rng, 0.15, 1.8, 1.2, false);
        });

    add({"askey_wilson", true, OperatorKind::ImaginaryShift,
         {{"a1", "|a_j| < 1, a1 != 0, set closed under conjugation", true},
          {"a2", "", true},
          {"a3", "", true},
          {"a4", "", true}},
         "eta(x) = cos x on (0, pi)",
         "E(n) = (q^{-n}-1)(1 - a1 a2 a3 a4 q^{n-1})",
         "V(x) = prod_j (1 - a_j e^{ix}) / ((1-e^{2ix})(1-q e^{2ix})), "
         "V*(x) = V(-x), shift x -> x -/+ i log q",
         "a1^{-n} (a1a2, a1a3, a1a4; q)_n 4phi3(q^{-n}, b4 q^{n-1}, a1 e^{ix}, "
         "a1 e^{-ix}; a1a2, a1a3, a1a4; q; q)"},
        [](const ParamSet& p, int cap) { return make_aw_like(p, cap, 4); },
        [](ParamSet& p, int, Rng& rng) {
          draw_conjugate_pairs(p, 4, rng, 0.1, 0.85, 0.6, true);
        });

    add({"continuous_dual_q_hahn", true, OperatorKind::ImaginaryShift,
         {{"a1", "|a_j| < 1, a1 != 0, set closed under conjugation", true},
          {"a2", "", true},
          {"a3", "", true}},
         "eta(x) = cos x on (0, pi)", "E(n) = q^{-n} - 1",
         "V(x) = prod_j (1 - a_j e^{ix}) / ((1-e^{2ix})(1-q e^{2ix}))",
         "a1^{-n} (a1a2, a1a3; q)_n 3phi2(q^{-n}, a1 e^{ix}, a1 e^{-ix}; "
         "a1a2, a1a3; q; q)"},
        [](const ParamSet& p, int cap) { return make_aw_like(p, cap, 3); },
        [](ParamSet& p, int, Rng& rng) {
          draw_conjugate_pairs(p, 3, rng, 0.1, 0.85, 0.6, true);
        });

    add({"al_salam_chihara", true, OperatorKind::ImaginaryShift,
         {{"a1", "|a_j| < 1, a1 != 0, set closed under conjugation", true},
          {"a2", "", true}},
         "eta(x) = cos x on (0, pi)", "E(n) = q^{-n} - 1",
         "V(x) = (1-a1 e^{ix})(1-a2 e^{ix}) / ((1-e^{2ix})(1-q e^{2ix}))",
         "a1^{-n} (a1a2; q)_n 3phi2(q^{-n}, a1 e^{ix}, a1 e^{-ix}; a1a2, 0; "
         "q; q)"},
        [](const ParamSet& p, int cap) { return make_aw_like(p, cap, 2); },
        [](ParamSet& p, int, Rng& rng) {
          draw_conjugate_pairs(p, 2, rng, 0.1, 0.85, 0.6, true);
        });

    add({"continuous_big_q_hermite", true, OperatorKind::ImaginaryShift,
         {{"a", "-1 < a < 1, a != 0"}},
         "eta(x) = cos x on (0, pi)", "E(n) = q^{-n} - 1",
         "V(x) = (1 - a e^{ix}) / ((1-e^{2ix})(1-q e^{2ix}))",
         "a^{-n} 3phi2(q^{-n}, a e^{ix}, a e^{-ix}; 0, 0; q; q)"},
        make_continuous_big_q_hermite, [](ParamSet& p, int, Rng& rng) {
          // the a^{-n}-normalized series cancels badly for q near 1 or tiny a
          p.q = rng.uniform(0.55, 0.80);
          double a = rng.uniform(0.25, 0.85);
          p.values["a"] = rng.coin() ? a : -a;
        });

    add({"continuous_q_hermite", true, OperatorKind::ImaginaryShift, {},
         "eta(x) = cos x on (0, pi)", "E(n) = q^{-n} - 1",
         "V(x) = 1 / ((1-e^{2ix})(1-q e^{2ix}))",
         "e^{inx} 2phi0(q^{-n}, 0; -; q; q^n e^{-2ix})"},
        make_continuous_q_hermite, [](ParamSet&, int, Rng&) {});

    add({"continuous_q_jacobi", true, OperatorKind::ImaginaryShift,
         {{"alpha", "alpha >= -1/2"}, {"beta", "beta >= -1/2"}},
         "eta(x) = cos x on (0, pi)",
         "E(n) = (q^{-n}-1)(1-q^{n+alpha+beta+1})",
         "V(x) with factors q^{(alpha+1/2)/2}, q^{(alpha+3/2)/2}, "
         "-q^{(beta+1/2)/2}, -q^{(beta+3/2)/2}",
         "(q^{alpha+1};q)_n/(q;q)_n 4phi3(...; q^{alpha+1}, "
         "-q^{(alpha+beta+1)/2}, -q^{(alpha+beta+2)/2}; q; q)"},
        [](const ParamSet& p, int cap) {
          return make_continuous_q_jacobi(p, cap, false);
        },
        [](ParamSet& p, int, Rng& rng) {
          p.values["alpha"] = rng.uniform(-0.45, 2.5);
          p.values["beta"] = rng.uniform(-0.45, 2.5);
        });

    add({"continuous_q_laguerre", true, OperatorKind::ImaginaryShift,
         {{"alpha", "alpha >= -1/2"}},
         "eta(x) = cos x on (0, pi)", "E(n) = q^{-n} - 1",
         "V(x) = (1-q^{(alpha+1/2)/2} e^{ix})(1-q^{(alpha+3/2)/2} e^{ix}) / "
         "((1-e^{2ix})(1-q e^{2ix}))",
         "(q^{alpha+1};q)_n/(q;q)_n 3phi2(q^{-n}, q^{(alpha+1/2)/2} e^{ix}, "
         "q^{(alpha+1/2)/2} e^{-ix}; q^{alpha+1}, 0; q; q)"},
        [](const ParamSet& p, int cap) {
          return make_continuous_q_jacobi(p, cap, true);
        },
        [](ParamSet& p, int, Rng& rng) {
          p.values["alpha"] = rng.uniform(-0.45, 2.5);
        });

    add({"hahn", false, OperatorKind::RealShift,
         {{"a", "a > 0"}, {"b", "b > 0"}, {"N", "lattice size, degree < N"}},
         "eta(x) = x on [0..N]", "E(n) = n(n+a+b-1)",
         "B(x) = (x+a)(N-x), D(x) = x(b+N-x)",
         "3F2(-n, n+a+b-1, -x; a, -N; 1)"},
        make_hahn, [](ParamSet& p, int degree, Rng& rng) {
          p.values["a"] = rng.uniform(0.1, 4.0);
          p.values["b"] = rng.uniform(0.1, 4.0);
          p.values["N"] = draw_lattice(degree, rng);
        });

    add({"krawtchouk", false, OperatorKind::RealShift,
         {{"p", "0 < p < 1"}, {"N", "lattice size, degree < N"}},
         "eta(x) = x on [0..N]", "E(n) = n",
         "B(x) = p(N-x), D(x) = (1-p)x", "2F1(-n, -x; -N; 1/p)"},
        make_krawtchouk, [](ParamSet& p, int degree, Rng& rng) {
          p.values["p"] = rng.uniform(0.08, 0.92);
          p.values["N"] = draw_lattice(degree, rng);
        });

    add({"meixner", false, OperatorKind::RealShift,
         {{"beta", "beta > 0"}, {"c", "0 < c < 1"}},
         "eta(x) = x on [0..inf)", "E(n) = n",
         "B(x) = c(x+beta)/(1-c), D(x) = x/(1-c)",
         "2F1(-n, -x; beta; 1-1/c)"},
        make_meixner, [](ParamSet& p, int, Rng& rng) {
          p.values["beta"] = rng.uniform(0.2, 4.0);
          p.values["c"] = rng.uniform(0.1, 0.85);
        });

    add({"charlier", false, OperatorKind::RealShift, {{"a", "a > 0"}},
         "eta(x) = x on [0..inf)", "E(n) = n", "B(x) = a, D(x) = x",
         "2F0(-n, -x; -; -1/a)"},
        make_charlier, [](ParamSet& p, int, Rng& rng) {
          p.values["a"] = rng.uniform(0.2, 4.0);
        });

    add({"racah", false, OperatorKind::RealShift,
         {{"a", "a > N + d"},
          {"b", "0 < b < 1 + d"},
          {"d", "d > 0"},
          {"N", "lattice size, degree < N; c = -N"}},
         "eta(x) = x(x+d) on [0..N]", "E(n) = n(n+a+b-N-d-1)",
         "B(x) = -(x+a)(x+b)(x-N)(x+d) / ((2x+d)(2x+1+d)), "
         "D(x) = -(x+d-a)(x+d-b)(x+d+N)x / ((2x-1+d)(2x+d))",
         "4F3(-n, n+a+b-N-d-1, -x, x+d; a, b, -N; 1)"},
        make_racah, [](ParamSet& p, int degree, Rng& rng) {
          // roomy lattices: zeros crammed against the lattice make the zero
          // identities unmeasurable in doubles
          int N = degree + 4 + rng.uniform_int(0, 6);
          double d = rng.uniform(0.15, 2.0);
          p.values["d"] = d;
          p.values["a"] = N + d + rng.uniform(0.3, 3.0);
          p.values["b"] = rng.uniform(0.1, 0.95) * (1.0 + d);
          p.values["N"] = N;
        });

    add({"dual_hahn", false, OperatorKind::RealShift,
         {{"a", "a > 0"}, {"b", "b > 0"}, {"N", "lattice size, degree < N"}},
         "eta(x) = x(x+a+b-1) on [0..N]", "E(n) = n",
         "B(x) = (x+a)(x+a+b-1)(N-x) / ((2x-1+a+b)(2x+a+b)), "
         "D(x) = x(x+b-1)(x+a+b+N-1) / ((2x-2+a+b)(2x-1+a+b))",
         "3F2(-n, x+a+b-1, -x; a, -N; 1)"},
        make_dual_hahn, [](ParamSet& p, int degree, Rng& rng) {
          p.values["a"] = rng.uniform(0.15, 3.0);
          p.values["b"] = rng.uniform(0.15, 3.0);
          p.values["N"] = draw_lattice(degree, rng);
        });

    add({"q_hahn", true, OperatorKind::RealShift,
         {{"a", "0 < a < 1"}, {"b", "0 < b < 1"},
          {"N", "lattice size, degree < N"}},
         "eta(x) = q^{-x} - 1 on [0..N]",
         "E(n) = (q^{-n}-1)(1-ab q^{n-1})",
         "B(x) = (1-a q^x)(q^{x-N}-1), D(x) = a q^{-1}(1-q^x)(q^{x-N}-b)",
         "3phi2(q^{-n}, ab q^{n-1}, q^{-x}; a, q^{-N}; q; q)"},
        make_q_hahn, [](ParamSet& p, int degree, Rng& rng) {
          p.values["a"] = rng.uniform(0.08, 0.92);
          p.values["b"] = rng.uniform(0.08, 0.92);
          p.values["N"] = draw_lattice(degree, rng);
        });

    add({"quantum_q_krawtchouk", true, OperatorKind::RealShift,
         {{"p", "p > q^{-N}"}, {"N", "lattice size, degree < N"}},
         "eta(x) = q^{-x} - 1 on [0..N]", "E(n) = 1 - q^n",
         "B(x) = p^{-1} q^x (q^{x-N}-1), "
         "D(x) = (1-q^x)(1-p^{-1} q^{x-N-1})",
         "2phi1(q^{-n}, q^{-x}; q^{-N}; q; p q^{n+1})"},
        make_quantum_q_krawtchouk, [](ParamSet& p, int degree, Rng& rng) {
          int N = draw_lattice(degree, rng);
          p.values["N"] = N;
          p.values["p"] = std::pow(p.q, -N) * rng.uniform(1.1, 3.0);
        });

    add({"q_krawtchouk", true, OperatorKind::RealShift,
         {{"p", "p > 0"}, {"N", "lattice size, degree < N"}},
         "eta(x) = q^{-x} - 1 on [0..N]", "E(n) = (q^{-n}-1)(1+p q^n)",
         "B(x) = q^{x-N} - 1, D(x) = p(1-q^x)",
         "3phi2(q^{-n}, q^{-x}, -p q^n; q^{-N}, 0; q; q)"},
        make_q_krawtchouk, [](ParamSet& p, int degree, Rng& rng) {
          p.values["p"] = rng.uniform(0.15, 4.0);
          p.values["N"] = draw_lattice(degree, rng);
        });

    add({"affine_q_krawtchouk", true, OperatorKind::RealShift,
         {{"p", "0 < p < q^{-1}"}, {"N", "lattice size, degree < N"}},
         "eta(x) = q^{-x} - 1 on [0..N]", "E(n) = q^{-n} - 1",
         "B(x) = (q^{x-N}-1)(1-p q^{x+1}), D(x) = p q^{x-N}(1-q^x)",
         "3phi2(q^{-n}, q^{-x}, 0; pq, q^{-N}; q; q)"},
        make_affine_q_krawtchouk, [](ParamSet& p, int degree, Rng& rng) {
          p.values["p"] = rng.uniform(0.08, 0.92) / p.q;
          p.values["N"] = draw_lattice(degree, rng);
        });

    add({"q_meixner", true, OperatorKind::RealShift,
         {{"b", "0 < b < q^{-1}"}, {"c", "c > 0"}},
         "eta(x) = q^{-x} - 1 on [0..inf)", "E(n) = 1 - q^n",
         "B(x) = c q^x (1-b q^{x+1}), D(x) = (1-q^x)(1+bc q^x)",
         "2phi1(q^{-n}, q^{-x}; bq; q; -q^{n+1}/c)"},
        make_q_meixner, [](ParamSet& p, int, Rng& rng) {
          p.values["b"] = rng.uniform(0.08, 0.92) / p.q;
          p.values["c"] = rng.uniform(0.2, 3.0);
        });

    add({"al_salam_carlitz_2", true, OperatorKind::RealShift,
         {{"a", "0 < a < q^{-1}"}},
         "eta(x) = q^{-x} - 1 on [0..inf)", "E(n) = 1 - q^n",
         "B(x) = a q^{2x+1}, D(x) = (1-q^x)(1-a q^x)",
         "2phi0(q^{-n}, q^{-x}; -; q; q^n/a)"},
        make_al_salam_carlitz_2, [](ParamSet& p, int, Rng& rng) {
          p.values["a"] = rng.uniform(0.08, 0.92) / p.q;
        });

    add({"q_charlier", true, OperatorKind::RealShift, {{"a", "a > 0"}},
         "eta(x) = q^{-x} - 1 on [0..inf)", "E(n) = 1 - q^n",
         "B(x) = a q^x, D(x) = 1 - q^x",
         "2phi1(q^{-n}, q^{-x}; 0; q; -q^{n+1}/a)"},
        make_q_charlier, [](ParamSet& p, int, Rng& rng) {
          p.values["a"] = rng.uniform(0.2, 3.0);
        });

    add({"little_q_jacobi", true, OperatorKind::RealShift,
         {{"a", "0 < a < q^{-1}"}, {"b", "0 < b < q^{-1}"}},
         "eta(x) = 1 - q^x on [0..inf)",
         "E(n) = (q^{-n}-1)(1-ab q^{n+1})",
         "B(x) = a(q^{-x} - bq), D(x) = q^{-x} - 1",
         "(-a)^{-n} q^{-n(n+1)/2} (aq;q)_n/(bq;q)_n "
         "2phi1(q^{-n}, ab q^{n+1}; aq; q; q^{x+1})"},
        make_little_q_jacobi, [](ParamSet& p, int, Rng& rng) {
          // aq away from 0: lattice-pinned zeros are unmeasurable in doubles
          p.values["a"] = rng.uniform(0.30, 0.90) / p.q;
          p.values["b"] = rng.uniform(0.08, 0.92) / p.q;
        });

    add({"little_q_laguerre", true, OperatorKind::RealShift,
         {{"a", "0 < a < q^{-1}"}},
         "eta(x) = 1 - q^x on [0..inf)", "E(n) = q^{-n} - 1",
         "B(x) = a q^{-x}, D(x) = q^{-x} - 1",
         "2phi0(q^{-n}, q^{-x}; -; q; q^x/a)"},
        make_little_q_laguerre, [](ParamSet& p, int, Rng& rng) {
          p.values["a"] = rng.uniform(0.30, 0.90) / p.q;
        });

    add({"alternative_q_charlier", true, OperatorKind::RealShift,
         {{"a", "a > 0"}},
         "eta(x) = 1 - q^x on [0..inf)", "E(n) = (q^{-n}-1)(1+a q^n)",
         "B(x) = a, D(x) = q^{-x} - 1",
         "q^{nx} 2phi1(q^{-n}, q^{-x}; 0; q; -q^{1-n}/a)"},
        make_alternative_q_charlier, [](ParamSet& p, int, Rng& rng) {
          p.values["a"] = rng.uniform(0.2, 3.0);
        });

    add({"q_racah", true, OperatorKind::RealShift,
         {{"a", "0 < a < q^N d"},
          {"b", "qd < b < 1"},
          {"d", "0 < d < 1"},
          {"N", "lattice size, degree < N; c = q^{-N}"}},
         "eta(x) = (q^{-x}-1)(1-d q^x) on [0..N]",
         "E(n) = (q^{-n}-1)(1 - abq^{-N-1}/d q^n)",
         "B, D rational in q^x with numerator factors (1-a q^x)(1-b q^x)"
         "(1-q^{x-N})(1-d q^x)",
         "4phi3(q^{-n}, dt q^n, q^{-x}, d q^x; a, b, q^{-N}; q; q)"},
        make_q_racah, [](ParamSet& p, int degree, Rng& rng) {
          int N = draw_lattice(degree, rng);
          double d = rng.uniform(0.15, 0.9);
          double qh = p.q;
          p.values["N"] = N;
          p.values["d"] = d;
          p.values["a"] = rng.uniform(0.08, 0.92) * std::pow(qh, N) * d;
          double lo = qh * d;
          p.values["b"] = lo + rng.uniform(0.08, 0.92) * (1.0 - lo);
        });

    add({"dual_q_hahn", true, OperatorKind::RealShift,
         {{"a", "0 < a < 1"}, {"b", "0 < b < 1"},
          {"N", "lattice size, degree < N"}},
         "eta(x) = (q^{-x}-1)(1-ab q^{x-1}) on [0..N]",
         "E(n) = q^{-n} - 1",
         "B, D rational in q^x with numerator factors (q^{x-N}-1)(1-a q^x)"
         "(1-ab q^{x-1})",
         "3phi2(q^{-n}, ab q^{x-1}, q^{-x}; a, q^{-N}; q; q)"},
        make_dual_q_hahn, [](ParamSet& p, int degree, Rng& rng) {
          p.values["a"] = rng.uniform(0.08, 0.92);
          p.values["b"] = rng.uniform(0.08, 0.92);
          p.values["N"] = draw_lattice(degree, rng);
        });

    return t;
  }();
  return table;
}

const Entry& find_entry(const std::string& name) {
  for (const Entry& e : registry())
    if (e.info.name == name) return e;
  throw ParamError("unknown family '" + name + "'");
}

}  // namespace

// ===========================================================================
// FamilySpec coordinate methods

cplx FamilySpec::eta(cplx x) const {
  const double q = params.q;
  switch (eta_kind) {
    case EtaKind::X: return x;
    case EtaKind::XSquared: return x * x;
    case EtaKind::Cos2X: return std::cos(2.0 * x);
    case EtaKind::CosX: return std::cos(x);
    case EtaKind::Quadratic: return x * (x + eta_c);
    case EtaKind::QInverse: return qpow(q, -x) - 1.0;
    case EtaKind::QPower: return 1.0 - qpow(q, x);
    case EtaKind::QBilinear: {
      cplx u = qpow(q, -x);
      return (u - 1.0) * (1.0 - eta_c / u);
    }
  }
  return {};
}

cplx FamilySpec::eta_dot(cplx x) const {
  const double q = params.q;
  const double lq = (params.q > 0) ? std::log(params.q) : 0.0;
  switch (eta_kind) {
    case EtaKind::X: return 1.0;
    case EtaKind::XSquared: return 2.0 * x;
    case EtaKind::Cos2X: return -2.0 * std::sin(2.0 * x);
    case EtaKind::CosX: return -std::sin(x);
    case EtaKind::Quadratic: return 2.0 * x + eta_c;
    case EtaKind::QInverse: return -lq * qpow(q, -x);
    case EtaKind::QPower: return -lq * qpow(q, x);
    case EtaKind::QBilinear:
      return -lq * (qpow(q, -x) - eta_c * qpow(q, x));
  }
  return {};
}

cplx FamilySpec::eta_ddot(cplx x) const {
  const double q = params.q;
  const double lq = (params.q > 0) ? std::log(params.q) : 0.0;
  switch (eta_kind) {
    case EtaKind::X: return 0.0;
    case EtaKind::XSquared: return 2.0;
    case EtaKind::Cos2X: return -4.0 * std::cos(2.0 * x);
    case EtaKind::CosX: return -std::cos(x);
    case EtaKind::Quadratic: return 2.0;
    case EtaKind::QInverse: return lq * lq * qpow(q, -x);
    case EtaKind::QPower: return -lq * lq * qpow(q, x);
    case EtaKind::QBilinear:
      return lq * lq * (qpow(q, -x) + eta_c * qpow(q, x));
  }
  return {};
}

cplx FamilySpec::eta_inverse(cplx y) const {
  const double lq = (params.q > 0) ? std::log(params.q) : 0.0;
  const bool real_input = std::abs(y.imag()) <= 1e-9 * (1.0 + std::abs(y));
  const double slack = 0.05 * (1.0 + std::abs(y));
  switch (eta_kind) {
    case EtaKind::X: return y;
    case EtaKind::XSquared:
      if (real_input && y.real() < -slack)
        throw DomainError("eta inverse: negative value outside the x^2 image");
      return std::sqrt(y);
    case EtaKind::Cos2X:
      if (real_input && std::abs(y.real()) > 1.0 + slack)
        throw DomainError("eta inverse: value outside the cos 2x image");
      return 0.5 * std::acos(y);
    case EtaKind::CosX:
      if (real_input && std::abs(y.real()) > 1.0 + slack)
        throw DomainError("eta inverse: value outside the cos x image");
      return std::acos(y);
    case EtaKind::Quadratic:
      return 0.5 * (-eta_c + std::sqrt(eta_c * eta_c + 4.0 * y));
    case EtaKind::QInverse: {
      cplx w = 1.0 + y;
      if (std::abs(w) < 1e-300 || (real_input && w.real() <= 0.0))
        throw DomainError("eta inverse: value outside the q^{-x}-1 image");
      return -std::log(w) / lq;
    }
    case EtaKind::QPower: {
      cplx w = 1.0 - y;
      if (std::abs(w) < 1e-300 || (real_input && w.real() <= 0.0))
        throw DomainError("eta inverse: value outside the 1-q^x image");
      return std::log(w) / lq;
    }
    case EtaKind::QBilinear: {
      // q^x solves A t^2 - (A+1+y) t + 1 = 0; the branch with x >= 0 is the
      // smaller root, computed in the cancellation-free form.
      cplx S = eta_c + 1.0 + y;
      cplx r = std::sqrt(S * S - 4.0 * eta_c);
      cplx den = S + r;
      if (std::abs(den) < 1e-300)
        throw DomainError("eta inverse: degenerate bilinear coordinate");
      cplx t = 2.0 / den;
      return std::log(t) / lq;
    }
  }
  return {};
}

double FamilySpec::energy(int n) const {
  if (n < 0) throw DomainError(name + ": energy index must be >= 0");
  if (lattice_size >= 0 && n > lattice_size)
    throw DomainError(name + ": energy index exceeds the finite lattice");
  return energy_fn(n);
}

cplx FamilySpec::poly(int n, cplx x) const {
  if (n < 0) throw DomainError(name + ": polynomial degree must be >= 0");
  return poly_fn(n, x);
}

OperatorData FamilySpec::operator_data(cplx x) const {
  if (op_kind == OperatorKind::Differential)
    throw DomainError(name + ": differential operator has no V/B data");
  return {forward_fn(x), backward_fn(x)};
}

// ===========================================================================
// registry surface

const std::vector<FamilyInfo>& family_catalog() {
  static const std::vector<FamilyInfo> infos = [] {
    std::vector<FamilyInfo> v;
    for (const Entry& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

FamilySpec resolve_family(const std::string& name,
                          const std::map<std::string, cplx>& raw_params,
                          double q, bool has_q, int degree_cap) {
  const Entry& e = find_entry(name);
  ParamSet p;
  p.family = name;
  p.values = raw_params;
  p.q = has_q ? q : 0.0;
  p.has_q = has_q;
  FamilySpec s = e.build(p, degree_cap);
  // E(0) = 0 and strict monotonicity up to the degree cap
  double prev = s.energy(0);
  if (std::abs(prev) > 1e-12)
    throw ParamError(name + ": E(0) must vanish");
  int top = s.lattice_size >= 0 ? std::min(s.max_degree + 1, s.lattice_size)
                                : s.max_degree + 1;
  for (int n = 1; n <= top; ++n) {
    double cur = s.energy(n);
    if (!(cur > prev))
      throw ParamError(name +
                       ": E(n) is not strictly increasing for these "
                       "parameters");
    prev = cur;
  }
  return s;
}

ParamSet draw_params(const std::string& name, int degree, Rng& rng) {
  const Entry& e = find_entry(name);
  for (int attempt = 0; attempt < 64; ++attempt) {
    ParamSet p;
    p.family = name;
    if (e.info.is_q) {
      p.has_q = true;
      p.q = draw_q(rng);
    }
    e.draw(p, degree, rng);
    try {
      resolve_family(p);
      return p;
    } catch (const Error&) {
      // boundary draw rejected by validation; redraw deterministically
    }
  }
  throw NumericalError(name + ": could not draw valid parameters");
}

}  // namespace opzero
