#include "alcs/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace alcs {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trajectory_csv(std::span<const StepRecord> records, std::ostream& out) {
  out << kTrajectoryHeader << '\n';
  for (const auto& r : records) {
    out << r.k << ',' << r.e_desired.value() << ',' << r.e_daylight.value() << ','
        << r.e_electric.value() << ',' << r.e_measured.value() << ',' << r.eps << ',' << r.deps
        << ',' << r.u.value() << ',' << r.u_im.value() << ',' << format_real(r.loss_inverse) << ','
        << format_real(r.loss_controller) << '\n';
  }
}

void write_summary(const BandReport& r, double extreme_fraction, std::ostream& out) {
  char line[160];
  auto row = [&](const char* name, const std::string& value) {
    std::snprintf(line, sizeof line, "  %-34s %s\n", name, value.c_str());
    out << line;
  };
  out << "Steady-state band report\n";
  row("warm-up steps", std::to_string(r.warmup_steps));
  row("steady steps", std::to_string(r.n_steady));
  if (r.no_steady_state) {
    out << "  (no steps past the warm-up; statistics are zero)\n";
  } else {
    row("error range [lx_d8bv]",
        "[" + std::to_string(r.eps_min) + ", " + std::to_string(r.eps_max) + "]");
  }
  row("error in [-11, 9]", format_real(100.0 * r.frac_in_wide) + " %");
  row("error in [-5, 5]", format_real(100.0 * r.frac_in_narrow) + " %");
  row("error in [-11,-6] or [6, 9]", format_real(100.0 * extreme_fraction) + " %");
  row("measured in [93, 107]", format_real(100.0 * r.frac_meas_in_perception) + " %");
  row("rms error", format_real(r.rms_eps));
  row("mean |error|", format_real(r.mean_abs_eps));

  out << "[summary]\n"
      << "warmup_steps=" << r.warmup_steps << '\n'
      << "n_steady=" << r.n_steady << '\n'
      << "eps_min=" << r.eps_min << '\n'
      << "eps_max=" << r.eps_max << '\n'
      << "frac_in_wide=" << format_real(r.frac_in_wide) << '\n'
      << "frac_in_narrow=" << format_real(r.frac_in_narrow) << '\n'
      << "frac_meas_in_perception=" << format_real(r.frac_meas_in_perception) << '\n'
      << "rms_eps=" << format_real(r.rms_eps) << '\n'
      << "mean_abs_eps=" << format_real(r.mean_abs_eps) << '\n'
      << "extreme_rarity=" << format_real(extreme_fraction) << '\n'
      << "no_steady_state=" << (r.no_steady_state ? 1 : 0) << '\n';
}

void write_svg_chart(const std::string& title, const std::string& y_label,
                     std::span<const Series> series, std::ostream& out) {
  constexpr double width = 800, height = 300, left = 60, right = 20, top = 30, bottom = 40;
  static const char* const colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};

  std::size_t n = 0;
  double lo = 0.0, hi = 1.0;
  bool any = false;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
  }
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto x_of = [&](std::size_t k) { return left + (n > 1 ? plot_w * k / double(n - 1) : 0.0); };
  auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "<text x=\"14\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 14 "
      << top + plot_h / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">"
      << format_real(hi) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + plot_h << "\" text-anchor=\"end\">"
      << format_real(lo) << "</text>\n";
  out << "<text x=\"" << left << "\" y=\"" << height - 12 << "\">0</text>\n";
  out << "<text x=\"" << width - right << "\" y=\"" << height - 12 << "\" text-anchor=\"end\">k = "
      << (n > 0 ? n - 1 : 0) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 4];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < series[s].values.size(); ++k)
      out << format_real(x_of(k)) << ',' << format_real(y_of(series[s].values[k])) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << left + 10 + 150 * s << "\" y=\"" << height - 12 << "\" fill=\"" << color
        << "\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_table(const std::filesystem::path& path, std::span<const Series> series) {
  auto out = open_for_write(path);
  out << "# k";
  for (const auto& s : series) out << ' ' << s.label;
  out << '\n';
  const std::size_t n = series.empty() ? 0 : series.front().values.size();
  for (std::size_t k = 0; k < n; ++k) {
    out << k;
    for (const auto& s : series) out << ' ' << format_real(s.values[k]);
    out << '\n';
  }
}

} // namespace

std::vector<std::filesystem::path> write_plot_files(std::span<const StepRecord> records,
                                                    const std::filesystem::path& dir) {
  auto column = [&](std::string label, auto field) {
    Series s{std::move(label), {}};
    s.values.reserve(records.size());
    for (const auto& r : records) s.values.push_back(field(r));
    return s;
  };
  const std::vector<Series> illuminance = {
      column("E_measured", [](const StepRecord& r) { return double(r.e_measured.value()); }),
      column("E_desired", [](const StepRecord& r) { return double(r.e_desired.value()); }),
      column("E_daylight", [](const StepRecord& r) { return double(r.e_daylight.value()); })};
  const std::vector<Series> error = {
      column("eps", [](const StepRecord& r) { return double(r.eps); })};
  const std::vector<Series> command = {
      column("U", [](const StepRecord& r) { return double(r.u.value()); }),
      column("U_IM", [](const StepRecord& r) { return double(r.u_im.value()); })};

  struct Panel {
    const char* stem;
    const char* title;
    const char* y_label;
    const std::vector<Series>& series;
  };
  const Panel panels[] = {
      {"illuminance", "Illuminance on the working plane", "lx_d8bv", illuminance},
      {"error", "Control error", "lx_d8bv", error},
      {"command", "Control action", "V_d8bv", command}};

  std::vector<std::filesystem::path> written;
  for (const auto& p : panels) {
    const auto dat = dir / (std::string(p.stem) + ".dat");
    write_table(dat, p.series);
    const auto svg = dir / (std::string(p.stem) + ".svg");
    auto out = open_for_write(svg);
    write_svg_chart(p.title, p.y_label, p.series, out);
    written.push_back(dat);
    written.push_back(svg);
  }
  return written;
}

} // namespace alcs
