#ifndef OPZERO_NUMERIC_HPP
#define OPZERO_NUMERIC_HPP

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace opzero {

using cplx = std::complex<double>;

inline constexpr char kToolVersion[] = "0.1.0";

/// Base class for all recoverable library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unknown family, missing/extra parameter, or a violated parameter range.
class ParamError : public Error {
public:
  using Error::Error;
};

/// Evaluation outside a branch image, at an operator pole, or a vanishing
/// series denominator.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Degenerate roots, failed convergence, or other numerical breakdown.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Product of (base - y_j) over all j except the listed skips.
inline cplx gap_product(cplx base, std::span<const cplx> y, int skip1 = -1,
                        int skip2 = -1) {
  cplx p = 1.0;
  for (int j = 0; j < static_cast<int>(y.size()); ++j) {
    if (j == skip1 || j == skip2) continue;
    p *= base - y[j];
  }
  return p;
}

}  // namespace opzero

#endif
