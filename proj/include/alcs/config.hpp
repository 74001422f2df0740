// Simulation configuration: defaults, `key = value` files, validation, and
// resolution into a runnable SimulationSetup.

#ifndef ALCS_CONFIG_HPP
#define ALCS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "alcs/loop.hpp"
#include "alcs/metrics.hpp"
#include "alcs/plant.hpp"

namespace alcs {

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

using LutSource = std::variant<LutShape, std::filesystem::path>;

struct SimConfig {
  long steps = 2000;
  int e_desired = 100;
  double gamma_controller = kDefaultLearningRate;
  double gamma_inverse = kDefaultLearningRate;
  std::uint64_t seed_controller = 1;
  std::uint64_t seed_inverse = 2;
  std::uint64_t seed_daylight = 7;
  LutSource lut = LutShape{};
  /// A FastChangesDaylight seed is replaced by seed_daylight on resolution.
  DaylightSource daylight = FastChangesDaylight{};
  long warmup = kDefaultWarmup;
  ErrorScaling error_scaling = ErrorScaling::Independent;
  int inverse_target_lag = 0;
  int plant_delay = 1;
  bool use_bias = true;
  std::filesystem::path out_dir = "out";
};

using Setting = std::pair<std::string, std::string>;

/// Keys accept `-` or `_` as separator: steps, e-desired, gamma-controller,
/// gamma-inverse, seed-controller, seed-inverse, seed-daylight, lut, daylight,
/// warmup, error-scaling, inverse-target-lag, plant-delay, bias, out-dir.
void apply_setting(SimConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; `#` starts a comment line.
std::vector<Setting> read_config_file(const std::filesystem::path& path);

/// Applies settings in order, then validates.
SimConfig make_config(const std::vector<Setting>& settings);

/// Range checks and existence of referenced files.
void validate(const SimConfig& config);

/// Parsers for the textual source forms used by the `lut` and `daylight` keys:
///   lut:      synthetic | synthetic:E_MAX,GAMMA,KNOTS | <csv path>
///   daylight: constant:C | step:C0,C1,K | ramp:C0,C1 | fast |
///             fast:BASE,AMPLITUDE,STEP_PROB,MAX_JUMP[,MAX_SLOPE] | <csv path>
LutSource parse_lut_source(std::string_view text);
DaylightSource parse_daylight_source(std::string_view text);
std::string describe(const LutSource& source);
std::string describe(const DaylightSource& source);

SimulationSetup resolve(const SimConfig& config);
SimulationResult run_simulation(const SimConfig& config);

} // namespace alcs

#endif // ALCS_CONFIG_HPP
