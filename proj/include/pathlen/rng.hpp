#ifndef PATHLEN_RNG_HPP
#define PATHLEN_RNG_HPP

#include <cstdint>

namespace pathlen {

/// splitmix64: a counter advanced by the golden-ratio increment and passed
/// through a bijective mixer. Output depends only on (seed, draw index), so
/// streams are reproducible across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on the open interval (0, 1) from the top 53 bits.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace pathlen

#endif  // PATHLEN_RNG_HPP
