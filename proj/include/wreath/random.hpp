#ifndef WREATH_RANDOM_HPP
#define WREATH_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace wreath {

/// Seeded source used by every randomized routine. The engine is
/// std::mt19937_64, whose output sequence is fixed by the standard; bounded
/// draws use rejection sampling so results do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t const limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) {
      x = engine_();
    }
    return x % bound;
  }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wreath

#endif  // WREATH_RANDOM_HPP
