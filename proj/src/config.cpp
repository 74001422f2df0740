#include "alcs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace alcs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string_view key) {
  std::string out(trim(key));
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    if constexpr (std::is_floating_point_v<T>)
      throw ConfigError(std::string(key), "expected a number, got '" + std::string(text) + "'");
    else
      throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

} // namespace

LutSource parse_lut_source(std::string_view text) {
  text = trim(text);
  if (text == "synthetic") return LutShape{};
  if (text.starts_with("synthetic:")) {
    const auto parts = split_commas(text.substr(10));
    if (parts.size() != 3)
      throw ConfigError("lut", "synthetic takes E_MAX,GAMMA,KNOTS");
    LutShape shape{parse_number<int>("lut", parts[0]), parse_number<double>("lut", parts[1]),
                   parse_number<int>("lut", parts[2])};
    return shape;
  }
  if (text.empty()) throw ConfigError("lut", "empty LUT source");
  return std::filesystem::path(std::string(text));
}

DaylightSource parse_daylight_source(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? "" : text.substr(colon + 1);
  const auto parts = split_commas(args);
  auto need = [&](std::size_t n, const char* usage) {
    if (colon == std::string_view::npos || parts.size() != n)
      throw ConfigError("daylight", std::string("expected ") + usage);
  };
  if (kind == "constant") {
    need(1, "constant:C");
    return ConstantDaylight{parse_number<int>("daylight", parts[0])};
  }
  if (kind == "step") {
    need(3, "step:C0,C1,K");
    return StepDaylight{parse_number<int>("daylight", parts[0]),
                        parse_number<int>("daylight", parts[1]),
                        parse_number<int>("daylight", parts[2])};
  }
  if (kind == "ramp") {
    need(2, "ramp:C0,C1");
    return RampDaylight{parse_number<int>("daylight", parts[0]),
                        parse_number<int>("daylight", parts[1])};
  }
  if (kind == "fast") {
    FastChangesDaylight f;
    if (colon == std::string_view::npos) return f;
    if (parts.size() != 4 && parts.size() != 5)
      throw ConfigError("daylight", "expected fast:BASE,AMPLITUDE,STEP_PROB,MAX_JUMP[,MAX_SLOPE]");
    f.base = parse_number<double>("daylight", parts[0]);
    f.amplitude = parse_number<double>("daylight", parts[1]);
    f.step_prob = parse_number<double>("daylight", parts[2]);
    f.max_jump = parse_number<double>("daylight", parts[3]);
    if (parts.size() == 5) f.max_slope = parse_number<double>("daylight", parts[4]);
    return f;
  }
  if (text.empty()) throw ConfigError("daylight", "empty daylight source");
  return CsvDaylight{std::filesystem::path(std::string(text))};
}

std::string describe(const LutSource& source) {
  if (const auto* shape = std::get_if<LutShape>(&source))
    return "synthetic:" + std::to_string(shape->e_max) + "," + format_real(shape->gamma_shape) +
           "," + std::to_string(shape->knot_count);
  return std::get<std::filesystem::path>(source).string();
}

std::string describe(const DaylightSource& source) {
  struct Describe {
    std::string operator()(const ConstantDaylight& c) const {
      return "constant:" + std::to_string(c.level);
    }
    std::string operator()(const StepDaylight& s) const {
      return "step:" + std::to_string(s.before) + "," + std::to_string(s.after) + "," +
             std::to_string(s.switch_step);
    }
    std::string operator()(const RampDaylight& r) const {
      return "ramp:" + std::to_string(r.start) + "," + std::to_string(r.end);
    }
    std::string operator()(const FastChangesDaylight& f) const {
      return "fast:" + format_real(f.base) + "," + format_real(f.amplitude) + "," +
             format_real(f.step_prob) + "," + format_real(f.max_jump) + "," +
             format_real(f.max_slope);
    }
    std::string operator()(const CsvDaylight& c) const { return c.path.string(); }
  };
  return std::visit(Describe{}, source);
}

void apply_setting(SimConfig& config, std::string_view raw_key, std::string_view value) {
  const std::string key = normalize_key(raw_key);
  if (key == "steps") {
    config.steps = parse_number<long>(key, value);
  } else if (key == "e-desired") {
    config.e_desired = parse_number<int>(key, value);
  } else if (key == "gamma-controller") {
    config.gamma_controller = parse_number<double>(key, value);
  } else if (key == "gamma-inverse") {
    config.gamma_inverse = parse_number<double>(key, value);
  } else if (key == "seed-controller") {
    config.seed_controller = parse_number<std::uint64_t>(key, value);
  } else if (key == "seed-inverse") {
    config.seed_inverse = parse_number<std::uint64_t>(key, value);
  } else if (key == "seed-daylight") {
    config.seed_daylight = parse_number<std::uint64_t>(key, value);
  } else if (key == "lut") {
    config.lut = parse_lut_source(value);
  } else if (key == "daylight") {
    config.daylight = parse_daylight_source(value);
  } else if (key == "warmup") {
    config.warmup = parse_number<long>(key, value);
  } else if (key == "error-scaling") {
    const auto v = trim(value);
    if (v == "independent")
      config.error_scaling = ErrorScaling::Independent;
    else if (v == "shared255")
      config.error_scaling = ErrorScaling::Shared255;
    else
      throw ConfigError(key, "expected independent or shared255, got '" + std::string(v) + "'");
  } else if (key == "inverse-target-lag") {
    config.inverse_target_lag = parse_number<int>(key, value);
  } else if (key == "plant-delay") {
    config.plant_delay = parse_number<int>(key, value);
  } else if (key == "bias") {
    config.use_bias = parse_bool(key, value);
  } else if (key == "out-dir") {
    config.out_dir = std::string(trim(value));
  } else {
    throw ConfigError(key, "unknown key");
  }
}

std::vector<Setting> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::vector<Setting> settings;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config", path.string() + " line " + std::to_string(line) +
                                      ": expected key = value");
    settings.emplace_back(std::string(trim(text.substr(0, eq))),
                          std::string(trim(text.substr(eq + 1))));
  }
  return settings;
}

SimConfig make_config(const std::vector<Setting>& settings) {
  SimConfig config;
  for (const auto& [key, value] : settings) apply_setting(config, key, value);
  validate(config);
  return config;
}

void validate(const SimConfig& c) {
  if (c.steps < 1) throw ConfigError("steps", "must be >= 1");
  if (c.e_desired < D8bv::kMin || c.e_desired > D8bv::kMax)
    throw ConfigError("e-desired", std::to_string(c.e_desired) + " outside [0, 255]");
  if (!(c.gamma_controller > 0.0) || !std::isfinite(c.gamma_controller))
    throw ConfigError("gamma-controller", "must be a positive finite number");
  if (!(c.gamma_inverse > 0.0) || !std::isfinite(c.gamma_inverse))
    throw ConfigError("gamma-inverse", "must be a positive finite number");
  if (c.warmup < 0) throw ConfigError("warmup", "must be >= 0");
  if (c.inverse_target_lag != 0 && c.inverse_target_lag != 1)
    throw ConfigError("inverse-target-lag", "must be 0 or 1");
  if (c.plant_delay != 0 && c.plant_delay != 1) throw ConfigError("plant-delay", "must be 0 or 1");

  if (const auto* shape = std::get_if<LutShape>(&c.lut)) {
    try {
      (void)synth_default_lut(*shape);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("lut", e.what());
    }
  } else if (!std::filesystem::exists(std::get<std::filesystem::path>(c.lut))) {
    throw ConfigError("lut", "file not found: " + std::get<std::filesystem::path>(c.lut).string());
  }

  if (const auto* csv = std::get_if<CsvDaylight>(&c.daylight)) {
    if (!std::filesystem::exists(csv->path))
      throw ConfigError("daylight", "file not found: " + csv->path.string());
  } else {
    try {
      (void)gen_daylight(c.daylight, 1);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("daylight", e.what());
    } catch (const std::out_of_range& e) {
      throw ConfigError("daylight", e.what());
    }
  }
}

SimulationSetup resolve(const SimConfig& config) {
  validate(config);
  SimulationSetup setup;
  if (const auto* shape = std::get_if<LutShape>(&config.lut))
    setup.lut = synth_default_lut(*shape);
  else
    setup.lut = load_lut_csv(std::get<std::filesystem::path>(config.lut));

  DaylightSource daylight = config.daylight;
  if (auto* f = std::get_if<FastChangesDaylight>(&daylight)) f->seed = config.seed_daylight;
  setup.daylight = gen_daylight(daylight, static_cast<std::size_t>(config.steps));

  setup.e_desired = D8bv(config.e_desired);
  setup.gamma_controller = config.gamma_controller;
  setup.gamma_inverse = config.gamma_inverse;
  setup.seed_controller = config.seed_controller;
  setup.seed_inverse = config.seed_inverse;
  setup.use_bias = config.use_bias;
  setup.error_scaling = config.error_scaling;
  setup.options.plant_delay = config.plant_delay;
  setup.options.inverse_target_lag = config.inverse_target_lag;
  return setup;
}

SimulationResult run_simulation(const SimConfig& config) { return simulate(resolve(config)); }

} // namespace alcs
