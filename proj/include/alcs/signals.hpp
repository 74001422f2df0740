// 8-bit engineering units and their mapping to the networks' [-1, 1] range.
//
// Illuminance is carried in lx_d8bv (8-bit A/D counts; 100 lx_d8bv is 500 lx
// on the working plane) and the command in V_d8bv (8-bit D/A counts; 127
// V_d8bv is 5 V dc). Both live on the integers [0, 255].

#ifndef ALCS_SIGNALS_HPP
#define ALCS_SIGNALS_HPP

#include <compare>
#include <cstdint>

namespace alcs {

/// An 8-bit converter value. Construction outside [0, 255] throws.
class D8bv {
public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 255;

  constexpr D8bv() = default;
  explicit D8bv(int value);

  /// Clamps into [0, 255] instead of throwing.
  static constexpr D8bv saturate(long value) {
    D8bv d;
    d.value_ = static_cast<std::uint8_t>(value < kMin ? kMin : value > kMax ? kMax : value);
    return d;
  }

  constexpr int value() const { return value_; }
  friend constexpr auto operator<=>(D8bv, D8bv) = default;

private:
  std::uint8_t value_ = 0;
};

enum class ErrorScaling {
  Independent,  // eps / 255, deps / 510
  Shared255,    // both / 255, clamped to [-1, 1]
};

inline constexpr int kMaxError = 255;
inline constexpr int kMaxDeltaError = 510;

/// v / 127.5 - 1.
double scale_to_unit(D8bv v);

/// Limits u to [-1, 1], then rounds (u + 1) * 127.5 half away from zero.
D8bv unit_to_d8bv(double u);

/// Throws std::out_of_range outside [-255, 255].
double scale_error(int eps, ErrorScaling mode = ErrorScaling::Independent);

/// Throws std::out_of_range outside [-510, 510].
double scale_delta_error(int deps, ErrorScaling mode = ErrorScaling::Independent);

/// Saturating sum of two illuminances, as seen by the 8-bit A/D.
D8bv clamp8_sum(D8bv a, D8bv b);

} // namespace alcs

#endif // ALCS_SIGNALS_HPP
