// Seeded uniform source shared by network initialization and daylight
// generation.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. std::uniform_real_distribution is not (libraries differ), so the
// mapping to [0, 1) is done here: the top 53 bits of each draw scaled by 2^-53.
// Seeds are therefore portable across compilers and platforms.

#ifndef ALCS_RANDOM_HPP
#define ALCS_RANDOM_HPP

#include <cstdint>
#include <random>

namespace alcs {

class SeededUniform {
public:
  explicit SeededUniform(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
  std::mt19937_64 engine_;
};

} // namespace alcs

#endif // ALCS_RANDOM_HPP
