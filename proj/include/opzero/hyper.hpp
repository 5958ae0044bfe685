#ifndef OPZERO_HYPER_HPP
#define OPZERO_HYPER_HPP

#include <vector>

#include "opzero/numeric.hpp"

namespace opzero::hyper {

/// Shifted factorial (a)_n = a (a+1) ... (a+n-1); empty product is 1.
cplx pochhammer(cplx a, int n);

/// q-shifted factorial (a;q)_n = (1-a)(1-aq)...(1-aq^{n-1}); empty product 1.
cplx q_pochhammer(cplx a, double q, int n);

/// Parameters of a terminating (basic) hypergeometric sum. The series is cut
/// after term_count+1 terms; callers arrange for a numerator parameter -n
/// (resp. q^{-n}) so the cut coincides with natural termination.
struct SeriesParams {
  std::vector<cplx> numerator;
  std::vector<cplx> denominator;
  cplx argument = 1.0;
  double q = 0.0;       // only read by hyper_phi
  int term_count = 0;   // evaluation sums exactly term_count+1 terms
  bool compensated = true;
};

/// Terminating rFs evaluated by iterated term ratios.
/// Throws DomainError when a denominator Pochhammer factor vanishes before
/// the termination index.
cplx hyper_F(const SeriesParams& p);

/// Terminating basic hypergeometric r phi s, including the
/// (-1)^{(1+s-r)k} q^{(1+s-r)k(k-1)/2} factor carried per term.
cplx hyper_phi(const SeriesParams& p);

/// Cancellation monitor: max |term| over |sum| of the most recent series
/// evaluated on this thread (1 when nothing ran since the reset). Rounding
/// of the series inputs couples into the value at this ratio above machine
/// precision.
void reset_cancellation();
double last_cancellation();

}  // namespace opzero::hyper

#endif
