// Steady-state error-band statistics over a record stream.

#ifndef ALCS_METRICS_HPP
#define ALCS_METRICS_HPP

#include <span>

#include "alcs/loop.hpp"

namespace alcs {

/// Closed interval of signed lx_d8bv values.
struct Band {
  int lo;
  int hi;
  constexpr bool contains(int v) const { return lo <= v && v <= hi; }
};

inline constexpr Band kWideErrorBand{-11, 9};
inline constexpr Band kNarrowErrorBand{-5, 5};
inline constexpr Band kPerceptionBand{93, 107};

inline constexpr long kDefaultWarmup = 200;

struct BandReport {
  long warmup_steps = 0;
  long n_steady = 0;
  int eps_min = 0;
  int eps_max = 0;
  double frac_in_wide = 0.0;
  double frac_in_narrow = 0.0;
  double frac_meas_in_perception = 0.0;
  double rms_eps = 0.0;
  double mean_abs_eps = 0.0;
  /// Set when no record lies past the warm-up; every statistic is then zero.
  bool no_steady_state = true;
};

/// Statistics over records with k >= warmup_steps.
BandReport band_report(std::span<const StepRecord> records, long warmup_steps = kDefaultWarmup);

/// Fraction of steady steps with eps outside the narrow band but inside the
/// wide one.
double extreme_rarity(std::span<const StepRecord> records, long warmup_steps = kDefaultWarmup);

} // namespace alcs

#endif // ALCS_METRICS_HPP
