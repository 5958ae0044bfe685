#ifndef OPZERO_RNG_HPP
#define OPZERO_RNG_HPP

#include <cstdint>
#include <string_view>

namespace opzero {

/// Deterministic splitmix64 generator. Used for all random draws so that
/// reports are byte-identical across platforms for a given seed; the
/// standard-library distributions do not guarantee that.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return (next_u64() & 1U) != 0; }

private:
  std::uint64_t state_;
};

/// Mixes a master seed with task coordinates into an independent stream seed,
/// so work-pool scheduling cannot affect which numbers a task sees.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = master ^ 0x2545f4914f6cdd1dULL;
  for (char c : tag) h = (h ^ static_cast<std::uint64_t>(c)) * 0x100000001b3ULL;
  h ^= a + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace opzero

#endif
