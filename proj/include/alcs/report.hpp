// Output files: trajectory CSV, band summary, and plot data per panel
// (illuminances, control error, command) as whitespace tables and SVG charts.

#ifndef ALCS_REPORT_HPP
#define ALCS_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "alcs/loop.hpp"
#include "alcs/metrics.hpp"

namespace alcs {

inline constexpr const char* kTrajectoryHeader =
    "k,E_desired,E_daylight,E_electric,E_measured,eps,deps,U,U_IM,loss_inverse,loss_controller";

/// Integers bare, reals with 9 significant digits.
std::string format_real(double v);

void write_trajectory_csv(std::span<const StepRecord> records, std::ostream& out);

/// Human-readable table followed by a `[summary]` block of key=value lines
/// whose keys mirror BandReport's fields.
void write_summary(const BandReport& report, double extreme_fraction, std::ostream& out);

struct Series {
  std::string label;
  std::vector<double> values;
};

/// Minimal self-contained SVG line chart, one polyline per series.
void write_svg_chart(const std::string& title, const std::string& y_label,
                     std::span<const Series> series, std::ostream& out);

/// Writes illuminance.{dat,svg}, error.{dat,svg} and command.{dat,svg} into
/// `dir`. Returns the written paths.
std::vector<std::filesystem::path> write_plot_files(std::span<const StepRecord> records,
                                                    const std::filesystem::path& dir);

} // namespace alcs

#endif // ALCS_REPORT_HPP
