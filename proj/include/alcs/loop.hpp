// Closed-loop daylight control: a 2-3-1 neural controller driven by the
// control error and its change, and a 3-3-1 inverse-model network identified
// online that supplies the controller's training target.

#ifndef ALCS_LOOP_HPP
#define ALCS_LOOP_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "alcs/plant.hpp"
#include "alcs/signals.hpp"
#include "alcs/tinynet.hpp"

namespace alcs {

using Net = Mlp<double>;

/// Three illuminance samples, newest first: (E(k), E(k-1), E(k-2)).
using IlluminanceTriple = std::array<D8bv, 3>;

inline constexpr double kDefaultLearningRate = 0.15;

struct ControllerNet {
  Net net;
  ErrorScaling scaling = ErrorScaling::Independent;
};

struct InverseModelNet {
  Net net;
};

/// [2, hidden, 1] with tanh hidden units and a linear output.
ControllerNet make_controller(std::uint64_t seed, double learning_rate = kDefaultLearningRate,
                              int hidden = 3, bool use_bias = true,
                              ErrorScaling scaling = ErrorScaling::Independent);

/// [3, hidden, 1] with tanh hidden units and a linear output.
InverseModelNet make_inverse_model(std::uint64_t seed,
                                   double learning_rate = kDefaultLearningRate, int hidden = 3,
                                   bool use_bias = true);

/// Network output limited to [-1, 1] and converted to V_d8bv.
D8bv controller_action(const ControllerNet& ctl, int eps, int deps);
D8bv inverse_action(const InverseModelNet& inv, const IlluminanceTriple& desired);

/// One online update each; both return the loss before the update.
double train_controller(ControllerNet& ctl, int eps_prev, int deps_prev, D8bv u_im);
double train_inverse(InverseModelNet& inv, const IlluminanceTriple& measured, D8bv u_target);

struct LoopOptions {
  /// 1: E_measured(k) responds to U(k-1), which is computed from eps(k-1).
  /// 0: U(k) is computed from eps(k-1), then E_measured(k) responds to U(k).
  int plant_delay = 1;
  /// Inverse-model target paired with the measured triple ending at k:
  /// 0 uses U(k), 1 uses U(k-1).
  int inverse_target_lag = 0;
};

struct LoopState {
  long k = 0;
  IlluminanceTriple measured{};
  IlluminanceTriple desired{};
  int eps_prev = 0;
  int deps_prev = 0;
  D8bv u_prev{0};
};

struct StepRecord {
  long k = 0;
  D8bv e_desired, e_daylight, e_electric, e_measured;
  int eps = 0;
  int deps = 0;
  D8bv u, u_im;
  double loss_inverse = 0.0;
  double loss_controller = 0.0;  // 0 at k = 0, where the controller is not trained
};

enum class StepPhase {
  Measured,
  CommandIssued,
  InverseTrained,
  InverseQueried,
  ControllerTrained,
  ControllerSkipped,
};

using PhaseObserver = std::function<void(StepPhase)>;

/// Advances the loop by one step:
///   measure, form eps and deps, issue U, train the inverse model on the
///   measured triple, query it on the desired triple for U_IM, then train the
///   controller on (eps(k-1), deps(k-1)) -> U_IM (skipped at k = 0).
/// At k = 0 the histories are filled with the first samples.
StepRecord loop_step(LoopState& state, ControllerNet& ctl, InverseModelNet& inv,
                     const ProcessLut& lut, D8bv e_desired, D8bv e_daylight,
                     const LoopOptions& options = {}, const PhaseObserver& observer = {});

struct SimulationSetup {
  ProcessLut lut = synth_default_lut();
  DaylightTrajectory daylight;
  D8bv e_desired{100};
  double gamma_controller = kDefaultLearningRate;
  double gamma_inverse = kDefaultLearningRate;
  std::uint64_t seed_controller = 1;
  std::uint64_t seed_inverse = 2;
  int hidden_controller = 3;
  int hidden_inverse = 3;
  bool use_bias = true;
  ErrorScaling error_scaling = ErrorScaling::Independent;
  LoopOptions options;
};

struct SimulationResult {
  std::vector<StepRecord> records;
  ControllerNet controller;
  InverseModelNet inverse;
};

/// One step per daylight sample, starting from fresh seeded networks.
SimulationResult simulate(const SimulationSetup& setup);

} // namespace alcs

#endif // ALCS_LOOP_HPP
