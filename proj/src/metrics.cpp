#include "alcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace alcs {

BandReport band_report(std::span<const StepRecord> records, long warmup_steps) {
  BandReport report;
  report.warmup_steps = warmup_steps;
  long wide = 0, narrow = 0, perceived = 0;
  double sum_sq = 0.0, sum_abs = 0.0;
  bool first = true;
  for (const auto& r : records) {
    if (r.k < warmup_steps) continue;
    ++report.n_steady;
    if (first) {
      report.eps_min = report.eps_max = r.eps;
      first = false;
    }
    report.eps_min = std::min(report.eps_min, r.eps);
    report.eps_max = std::max(report.eps_max, r.eps);
    wide += kWideErrorBand.contains(r.eps);
    narrow += kNarrowErrorBand.contains(r.eps);
    perceived += kPerceptionBand.contains(r.e_measured.value());
    sum_sq += double(r.eps) * r.eps;
    sum_abs += std::abs(r.eps);
  }
  if (report.n_steady == 0) return report;
  report.no_steady_state = false;
  const double n = double(report.n_steady);
  report.frac_in_wide = wide / n;
  report.frac_in_narrow = narrow / n;
  report.frac_meas_in_perception = perceived / n;
  report.rms_eps = std::sqrt(sum_sq / n);
  report.mean_abs_eps = sum_abs / n;
  return report;
}

double extreme_rarity(std::span<const StepRecord> records, long warmup_steps) {
  long steady = 0, extreme = 0;
  for (const auto& r : records) {
    if (r.k < warmup_steps) continue;
    ++steady;
    extreme += kWideErrorBand.contains(r.eps) && !kNarrowErrorBand.contains(r.eps);
  }
  return steady == 0 ? 0.0 : double(extreme) / double(steady);
}

} // namespace alcs
