#include "alcs/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace alcs {

D8bv::D8bv(int value) {
  if (value < kMin || value > kMax)
    throw std::out_of_range("value " + std::to_string(value) + " outside [0, 255]");
  value_ = static_cast<std::uint8_t>(value);
}

double scale_to_unit(D8bv v) { return v.value() / 127.5 - 1.0; }

D8bv unit_to_d8bv(double u) {
  const double limited = std::clamp(u, -1.0, 1.0);
  // std::round rounds halfway cases away from zero.
  return D8bv::saturate(static_cast<long>(std::round((limited + 1.0) * 127.5)));
}

// Both scaling modes divide the error by 255.
double scale_error(int eps, ErrorScaling) {
  if (eps < -kMaxError || eps > kMaxError)
    throw std::out_of_range("control error " + std::to_string(eps) + " outside [-255, 255]");
  return eps / 255.0;
}

double scale_delta_error(int deps, ErrorScaling mode) {
  if (deps < -kMaxDeltaError || deps > kMaxDeltaError)
    throw std::out_of_range("change in error " + std::to_string(deps) + " outside [-510, 510]");
  if (mode == ErrorScaling::Shared255) return std::clamp(deps / 255.0, -1.0, 1.0);
  return deps / 510.0;
}

D8bv clamp8_sum(D8bv a, D8bv b) { return D8bv::saturate(a.value() + b.value()); }

} // namespace alcs
