#include "opzero/hyper.hpp"

#include <cmath>

namespace opzero::hyper {

namespace {

// The terminating sums cancel heavily in parts of the q-parameter space
// (terms orders of magnitude above the value), so the term recurrence and
// the compensated sum run in extended precision internally.
using lcplx = std::complex<long double>;

// Structural zeros are distinguished from underflow by this cutoff.
constexpr long double kVanishing = 1e-300L;

lcplx widen(cplx v) { return {v.real(), v.imag()}; }

thread_local double tl_cancellation = 1.0;

void record_cancellation(long double max_term, lcplx sum) {
  long double mag = std::abs(sum);
  tl_cancellation =
      mag < 1e-300L ? 1e300 : static_cast<double>(max_term / mag);
}

cplx narrow(lcplx v) {
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

[[noreturn]] void throw_vanishing(const char* kind, int k) {
  throw DomainError(std::string(kind) +
                    " denominator factor vanishes at term index " +
                    std::to_string(k) + " before termination");
}

class LongSum {
public:
  void add(lcplx v) {
    add_part(re_, ce_, v.real());
    add_part(im_, ci_, v.imag());
  }
  lcplx value() const { return {re_ + ce_, im_ + ci_}; }

private:
  static void add_part(long double& s, long double& c, long double v) {
    long double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  long double re_ = 0, im_ = 0, ce_ = 0, ci_ = 0;
};

}  // namespace

cplx pochhammer(cplx a, int n) {
  lcplx p = 1.0L;
  lcplx la = widen(a);
  for (int k = 0; k < n; ++k) p *= la + static_cast<long double>(k);
  return narrow(p);
}

cplx q_pochhammer(cplx a, double q, int n) {
  lcplx p = 1.0L;
  lcplx qk = 1.0L;
  const long double lq = q;
  for (int k = 0; k < n; ++k) {
    p *= 1.0L - widen(a) * qk;
    qk *= lq;
  }
  return narrow(p);
}

cplx hyper_F(const SeriesParams& p) {
  LongSum acc;
  lcplx term = 1.0L;
  lcplx plain = 1.0L;
  long double max_term = 1.0L;
  const lcplx z = widen(p.argument);
  acc.add(term);
  for (int k = 0; k < p.term_count; ++k) {
    lcplx num = 1.0L;
    for (cplx a : p.numerator) num *= widen(a) + static_cast<long double>(k);
    lcplx den = static_cast<long double>(k + 1);
    for (cplx b : p.denominator) {
      lcplx f = widen(b) + static_cast<long double>(k);
      if (std::abs(f) < kVanishing) throw_vanishing("hypergeometric", k);
      den *= f;
    }
    term *= num / den * z;
    if (term == 0.0L) break;  // a numerator parameter hit a non-positive integer
    max_term = std::max(max_term, std::abs(term));
    acc.add(term);
    plain += term;
  }
  lcplx sum = p.compensated ? acc.value() : plain;
  record_cancellation(max_term, sum);
  return narrow(sum);
}

cplx hyper_phi(const SeriesParams& p) {
  const int excess =
      1 + static_cast<int>(p.denominator.size()) - static_cast<int>(p.numerator.size());
  const long double sign = (excess % 2 == 0) ? 1.0L : -1.0L;
  const long double lq = p.q;
  LongSum acc;
  lcplx term = 1.0L;
  lcplx plain = 1.0L;
  long double max_term = 1.0L;
  const lcplx z = widen(p.argument);
  acc.add(term);
  long double qk = 1.0L;
  for (int k = 0; k < p.term_count; ++k) {
    lcplx num = 1.0L;
    for (cplx a : p.numerator) num *= 1.0L - widen(a) * qk;
    lcplx den = 1.0L - std::pow(lq, k + 1);
    if (std::abs(den) < kVanishing) throw_vanishing("basic hypergeometric", k);
    for (cplx b : p.denominator) {
      lcplx f = 1.0L - widen(b) * qk;
      if (std::abs(f) < kVanishing) throw_vanishing("basic hypergeometric", k);
      den *= f;
    }
    // step factor of (-1)^{e k} q^{e k(k-1)/2} from term k to k+1
    term *= num / den * z * sign * std::pow(lq, excess * k);
    qk *= lq;
    if (term == 0.0L) break;
    max_term = std::max(max_term, std::abs(term));
    acc.add(term);
    plain += term;
  }
  lcplx sum = p.compensated ? acc.value() : plain;
  record_cancellation(max_term, sum);
  return narrow(sum);
}

void reset_cancellation() { tl_cancellation = 1.0; }

double last_cancellation() { return tl_cancellation; }

}  // namespace opzero::hyper
