#include "alcs/plant.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "alcs/random.hpp"

namespace alcs {

ProcessLut::ProcessLut(std::vector<LutKnot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw std::invalid_argument("a process LUT needs at least 2 knots");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (knots_[i].u <= knots_[i - 1].u)
      throw std::invalid_argument("LUT commands must be strictly increasing");
    if (knots_[i].e < knots_[i - 1].e)
      throw std::invalid_argument("LUT illuminance must be non-decreasing");
  }
}

D8bv ProcessLut::operator()(D8bv u) const {
  if (u <= knots_.front().u) return knots_.front().e;
  if (u >= knots_.back().u) return knots_.back().e;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), u,
                                   [](D8bv v, const LutKnot& k) { return v < k.u; });
  const auto lo = hi - 1;
  if (lo->u == u) return lo->e;
  const double t = double(u.value() - lo->u.value()) / double(hi->u.value() - lo->u.value());
  const double e = lo->e.value() + t * (hi->e.value() - lo->e.value());
  return D8bv::saturate(static_cast<long>(std::round(e)));
}

ProcessLut synth_default_lut(const LutShape& shape) {
  if (shape.e_max < 120 || shape.e_max > 255)
    throw std::invalid_argument("e_max must lie in [120, 255]");
  if (!(shape.gamma_shape > 0.0) || !std::isfinite(shape.gamma_shape))
    throw std::invalid_argument("gamma_shape must be positive");
  if (shape.knot_count < 8 || shape.knot_count > 256)
    throw std::invalid_argument("knot_count must lie in [8, 256]");
  std::vector<LutKnot> knots;
  knots.reserve(shape.knot_count);
  for (int i = 0; i < shape.knot_count; ++i) {
    const long u = std::lround(255.0 * i / (shape.knot_count - 1));
    const double e = shape.e_max * std::pow(u / 255.0, shape.gamma_shape);
    knots.push_back({D8bv::saturate(u), D8bv::saturate(std::lround(e))});
  }
  return ProcessLut(std::move(knots));
}

D8bv brute_force_inverse(const ProcessLut& lut, D8bv e) {
  int best = 0;
  int best_gap = 256;
  for (int u = 0; u <= 255; ++u) {
    const int gap = std::abs(lut(D8bv(u)).value() - e.value());
    if (gap < best_gap) {
      best = u;
      best_gap = gap;
    }
  }
  return D8bv(best);
}

D8bv plant_measure(const ProcessLut& lut, D8bv u_applied, D8bv daylight) {
  return clamp8_sum(lut(u_applied), daylight);
}

namespace {

struct Validated {
  void operator()(const ConstantDaylight& c) const { check_level(c.level, "constant level"); }
  void operator()(const StepDaylight& s) const {
    check_level(s.before, "step level before");
    check_level(s.after, "step level after");
    if (s.switch_step < 0) throw std::invalid_argument("step switch index must be >= 0");
  }
  void operator()(const RampDaylight& r) const {
    check_level(r.start, "ramp start");
    check_level(r.end, "ramp end");
  }
  void operator()(const FastChangesDaylight& f) const {
    if (!(f.base >= 0.0 && f.base <= 255.0)) throw std::invalid_argument("base must lie in [0, 255]");
    if (!(f.amplitude >= 0.0)) throw std::invalid_argument("amplitude must be >= 0");
    if (!(f.step_prob >= 0.0 && f.step_prob <= 1.0))
      throw std::invalid_argument("step_prob must lie in [0, 1]");
    if (!(f.max_jump >= 0.0)) throw std::invalid_argument("max_jump must be >= 0");
    if (!(f.max_slope >= 0.0)) throw std::invalid_argument("max_slope must be >= 0");
  }
  void operator()(const CsvDaylight&) const {}

  static void check_level(int v, const char* what) {
    if (v < D8bv::kMin || v > D8bv::kMax)
      throw std::invalid_argument(std::string(what) + " must lie in [0, 255]");
  }
};

std::vector<D8bv> fast_changes(const FastChangesDaylight& f, std::size_t length) {
  SeededUniform rng(f.seed);
  const double lo = std::max(0.0, f.base - f.amplitude);
  const double hi = std::min(255.0, f.base + f.amplitude);
  double level = std::clamp(f.base, lo, hi);
  double slope = rng.uniform(-f.max_slope, f.max_slope);
  std::vector<D8bv> out;
  out.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    out.push_back(D8bv::saturate(std::lround(level)));
    if (rng.next() < f.step_prob) {
      level += rng.uniform(-f.max_jump, f.max_jump);
      slope = rng.uniform(-f.max_slope, f.max_slope);
    } else {
      level += slope;
    }
    if (level < lo) {
      level = lo;
      slope = std::abs(slope);
    } else if (level > hi) {
      level = hi;
      slope = -std::abs(slope);
    }
  }
  return out;
}

} // namespace

DaylightTrajectory gen_daylight(const DaylightSource& source, std::size_t length) {
  std::visit(Validated{}, source);
  DaylightTrajectory traj{{}, source};
  auto& out = traj.samples;
  if (const auto* c = std::get_if<ConstantDaylight>(&source)) {
    out.assign(length, D8bv(c->level));
  } else if (const auto* s = std::get_if<StepDaylight>(&source)) {
    for (std::size_t k = 0; k < length; ++k)
      out.push_back(D8bv(k < static_cast<std::size_t>(s->switch_step) ? s->before : s->after));
  } else if (const auto* r = std::get_if<RampDaylight>(&source)) {
    for (std::size_t k = 0; k < length; ++k) {
      const double t = length > 1 ? double(k) / double(length - 1) : 0.0;
      out.push_back(D8bv::saturate(std::lround(r->start + t * (r->end - r->start))));
    }
  } else if (const auto* f = std::get_if<FastChangesDaylight>(&source)) {
    out = fast_changes(*f, length);
  } else {
    const auto& csv = std::get<CsvDaylight>(source);
    auto loaded = load_daylight_csv(csv.path);
    if (loaded.size() < length)
      throw LoadError(csv.path.string() + ": holds " + std::to_string(loaded.size()) +
                      " daylight samples, " + std::to_string(length) + " needed");
    out.assign(loaded.samples.begin(), loaded.samples.begin() + static_cast<long>(length));
  }
  return traj;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view field, int line) {
  field = trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw LoadError("malformed integer '" + std::string(field) + "' at line " +
                        std::to_string(line),
                    line);
  return value;
}

D8bv parse_level(std::string_view field, int line) {
  const int v = parse_int(field, line);
  if (v < D8bv::kMin || v > D8bv::kMax)
    throw LoadError("value " + std::to_string(v) + " out of range [0, 255] at line " +
                        std::to_string(line),
                    line);
  return D8bv(v);
}

/// Calls row(line_number, first, second) for every data row after `header`.
template <typename RowFn>
void scan_pairs(std::istream& in, std::string_view header, RowFn&& row) {
  std::string raw;
  int line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_header) {
      if (text != header)
        throw LoadError("expected header '" + std::string(header) + "' at line " +
                            std::to_string(line),
                        line);
      seen_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
      throw LoadError("malformed row at line " + std::to_string(line) + ": expected two fields",
                      line);
    row(line, text.substr(0, comma), text.substr(comma + 1));
  }
  if (!seen_header) throw LoadError("missing header '" + std::string(header) + "'");
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string(), 0, LoadError::Kind::Io);
  return in;
}

template <typename Parse>
auto with_path(const std::filesystem::path& path, Parse&& parse) {
  auto in = open_or_throw(path);
  try {
    return parse(in);
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what(), e.line(), e.kind());
  }
}

} // namespace

ProcessLut parse_lut_csv(std::istream& in) {
  std::vector<LutKnot> knots;
  scan_pairs(in, "u,e", [&](int line, std::string_view a, std::string_view b) {
    const LutKnot knot{parse_level(a, line), parse_level(b, line)};
    if (!knots.empty()) {
      if (knot.u <= knots.back().u)
        throw LoadError("non-increasing u at line " + std::to_string(line), line);
      if (knot.e < knots.back().e)
        throw LoadError("decreasing e at line " + std::to_string(line), line);
    }
    knots.push_back(knot);
  });
  if (knots.size() < 2) throw LoadError("a LUT file needs at least 2 rows");
  return ProcessLut(std::move(knots));
}

ProcessLut load_lut_csv(const std::filesystem::path& path) {
  return with_path(path, [](std::istream& in) { return parse_lut_csv(in); });
}

void write_lut_csv(const ProcessLut& lut, std::ostream& out) {
  out << "u,e\n";
  for (const auto& k : lut.knots()) out << k.u.value() << ',' << k.e.value() << '\n';
}

DaylightTrajectory parse_daylight_csv(std::istream& in) {
  DaylightTrajectory traj;
  scan_pairs(in, "k,e", [&](int line, std::string_view a, std::string_view b) {
    const int k = parse_int(a, line);
    if (k != static_cast<int>(traj.samples.size()))
      throw LoadError("expected k = " + std::to_string(traj.samples.size()) + " at line " +
                          std::to_string(line),
                      line);
    traj.samples.push_back(parse_level(b, line));
  });
  return traj;
}

DaylightTrajectory load_daylight_csv(const std::filesystem::path& path) {
  auto traj = with_path(path, [](std::istream& in) { return parse_daylight_csv(in); });
  traj.provenance = CsvDaylight{path};
  return traj;
}

void write_daylight_csv(std::span<const D8bv> samples, std::ostream& out) {
  out << "k,e\n";
  for (std::size_t k = 0; k < samples.size(); ++k) out << k << ',' << samples[k].value() << '\n';
}

} // namespace alcs
