#ifndef OPZERO_FAMILIES_HPP
#define OPZERO_FAMILIES_HPP

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "opzero/numeric.hpp"
#include "opzero/rng.hpp"

namespace opzero {

enum class OperatorKind { Differential, ImaginaryShift, RealShift };

/// Supported sinusoidal coordinates eta(x).
enum class EtaKind {
  X,          // eta = x
  XSquared,   // eta = x^2
  Cos2X,      // eta = cos 2x
  CosX,       // eta = cos x
  Quadratic,  // eta = x (x + c)
  QInverse,   // eta = q^{-x} - 1
  QPower,     // eta = 1 - q^x
  QBilinear,  // eta = (q^{-x} - 1)(1 - c q^x)
};

struct ParamSet {
  std::string family;
  std::map<std::string, cplx> values;  // ordered for deterministic reports
  double q = 0.0;
  bool has_q = false;
};

/// Values of the operator coefficient pair at one point: {V, V*} for
/// imaginary-shift operators, {B, D} for real-shift ones.
struct OperatorData {
  cplx forward;
  cplx backward;
};

/// A fully resolved polynomial family. Immutable after resolution; all
/// member calls are pure and safe to invoke concurrently.
struct FamilySpec {
  std::string name;
  ParamSet params;
  OperatorKind op_kind = OperatorKind::Differential;
  EtaKind eta_kind = EtaKind::X;
  double eta_c = 0.0;        // constant of Quadratic / QBilinear coordinates
  double shift_scale = 1.0;  // gamma of imaginary-shift operators
  int lattice_size = -1;     // finite lattice size, -1 when not on one
  bool semi_infinite_lattice = false;
  int max_degree = 16;

  std::function<double(int)> energy_fn;
  std::function<cplx(int, cplx)> poly_fn;
  std::function<cplx(cplx)> forward_fn;   // V(x) or B(x)
  std::function<cplx(cplx)> backward_fn;  // V*(x) or D(x)
  std::function<cplx(cplx)> drift_fn;     // differential kind only
  // eta-space interval expected to contain the zeros of the given degree;
  // absent for semi-infinite lattices (located by scanning instead)
  std::function<std::pair<double, double>(int)> bracket_fn;
  bool bracket_exact = false;  // bracket is the exact eta-image of the domain

  cplx eta(cplx x) const;
  cplx eta_dot(cplx x) const;
  cplx eta_ddot(cplx x) const;
  cplx eta_inverse(cplx y) const;

  /// Eigenvalue of the polynomial of degree n; E(0) = 0.
  double energy(int n) const;

  /// P_n(eta(x)) at base-space point x, in the family normalization.
  cplx poly(int n, cplx x) const;

  OperatorData operator_data(cplx x) const;

  bool is_classical() const { return op_kind == OperatorKind::Differential; }
};

struct ParamDesc {
  std::string name;
  std::string range;
  bool complex_ok = false;
};

struct FamilyInfo {
  std::string name;
  bool is_q = false;
  OperatorKind op_kind;
  std::vector<ParamDesc> params;
  std::string eta_text;
  std::string energy_text;
  std::string operator_text;
  std::string poly_text;
};

/// All registered families in registry order.
const std::vector<FamilyInfo>& family_catalog();

/// Builds a validated FamilySpec. Throws ParamError naming the violated
/// constraint for unknown families and missing/extra/out-of-range parameters.
FamilySpec resolve_family(const std::string& name,
                          const std::map<std::string, cplx>& raw_params,
                          double q = 0.0, bool has_q = false,
                          int degree_cap = 16);

inline FamilySpec resolve_family(const ParamSet& p, int degree_cap = 16) {
  return resolve_family(p.family, p.values, p.q, p.has_q, degree_cap);
}

/// Random valid parameter draw for sweeps. Values stay away from the printed
/// boundaries; finite lattices are sized to admit the requested degree.
ParamSet draw_params(const std::string& name, int degree, Rng& rng);

}  // namespace opzero

#endif
