// The lighting process: a look-up table from command (V_d8bv) to electric
// illuminance (lx_d8bv), plus the additive daylight disturbance.

#ifndef ALCS_PLANT_HPP
#define ALCS_PLANT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "alcs/signals.hpp"

namespace alcs {

/// Raised by the CSV loaders. line() is 1-based, 0 when the error is not tied
/// to a particular line.
class LoadError : public std::runtime_error {
public:
  enum class Kind { Content, Io };

  LoadError(const std::string& what, int line = 0, Kind kind = Kind::Content)
      : std::runtime_error(what), line_(line), kind_(kind) {}
  int line() const { return line_; }
  Kind kind() const { return kind_; }

private:
  int line_;
  Kind kind_;
};

struct LutKnot {
  D8bv u;
  D8bv e;
  friend bool operator==(const LutKnot&, const LutKnot&) = default;
};

/// Monotone piecewise-linear table, constant beyond the first and last knot.
class ProcessLut {
public:
  /// Requires >= 2 knots, strictly increasing u, non-decreasing e.
  explicit ProcessLut(std::vector<LutKnot> knots);

  /// Electric illuminance for command u, rounded half away from zero.
  D8bv operator()(D8bv u) const;

  std::span<const LutKnot> knots() const { return knots_; }
  friend bool operator==(const ProcessLut&, const ProcessLut&) = default;

private:
  std::vector<LutKnot> knots_;
};

inline D8bv lut_eval(const ProcessLut& lut, D8bv u) { return lut(u); }

struct LutShape {
  int e_max = 180;
  double gamma_shape = 1.3;
  int knot_count = 32;
};

/// Knots at u_i = round(255 i / (n - 1)) with e = round(e_max (u / 255)^gamma).
ProcessLut synth_default_lut(const LutShape& shape = {});

/// Smallest command whose output is closest to `e` (exhaustive over 0..255).
D8bv brute_force_inverse(const ProcessLut& lut, D8bv e);

/// Measured illuminance for the command applied to the lamps and the daylight.
D8bv plant_measure(const ProcessLut& lut, D8bv u_applied, D8bv daylight);

// Daylight trajectories.

struct ConstantDaylight {
  int level = 30;
};

struct StepDaylight {
  int before = 0;
  int after = 100;
  int switch_step = 0;
};

struct RampDaylight {
  int start = 0;
  int end = 100;
};

/// Piecewise ramps with occasional jumps. Each step: with probability
/// step_prob the level jumps by U(-max_jump, max_jump) and a new ramp slope is
/// drawn from U(-max_slope, max_slope); otherwise the current ramp continues.
/// The level is confined to [base - amplitude, base + amplitude] and [0, 255];
/// the slope reverses on contact with a bound.
struct FastChangesDaylight {
  std::uint64_t seed = 7;
  double base = 40.0;
  double amplitude = 60.0;
  double step_prob = 0.05;
  double max_jump = 50.0;
  double max_slope = 0.5;
};

struct CsvDaylight {
  std::filesystem::path path;
};

using DaylightSource =
    std::variant<ConstantDaylight, StepDaylight, RampDaylight, FastChangesDaylight, CsvDaylight>;

struct DaylightTrajectory {
  std::vector<D8bv> samples;
  DaylightSource provenance;

  std::size_t size() const { return samples.size(); }
  D8bv operator[](std::size_t k) const { return samples[k]; }
};

/// Generates `length` samples. CsvDaylight sources are loaded from disk and
/// must hold at least `length` rows; extra rows are dropped.
DaylightTrajectory gen_daylight(const DaylightSource& source, std::size_t length);

// CSV files. Header `u,e` (LUT) or `k,e` (daylight); `#` lines and blank lines
// are skipped.

ProcessLut load_lut_csv(const std::filesystem::path& path);
ProcessLut parse_lut_csv(std::istream& in);
void write_lut_csv(const ProcessLut& lut, std::ostream& out);

DaylightTrajectory load_daylight_csv(const std::filesystem::path& path);
DaylightTrajectory parse_daylight_csv(std::istream& in);
void write_daylight_csv(std::span<const D8bv> samples, std::ostream& out);

} // namespace alcs

#endif // ALCS_PLANT_HPP
