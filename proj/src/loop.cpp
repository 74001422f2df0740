#include "alcs/loop.hpp"

#include <stdexcept>

namespace alcs {

namespace {

const std::vector<Activation> kHiddenThenLinear = {Activation::HyperbolicTangent,
                                                   Activation::Linear};

Eigen::Vector2d controller_input(const ControllerNet& ctl, int eps, int deps) {
  return {scale_error(eps, ctl.scaling), scale_delta_error(deps, ctl.scaling)};
}

Eigen::Vector3d triple_input(const IlluminanceTriple& e) {
  return {scale_to_unit(e[0]), scale_to_unit(e[1]), scale_to_unit(e[2])};
}

void notify(const PhaseObserver& observer, StepPhase phase) {
  if (observer) observer(phase);
}

} // namespace

ControllerNet make_controller(std::uint64_t seed, double learning_rate, int hidden, bool use_bias,
                              ErrorScaling scaling) {
  return {Net::random({2, hidden, 1}, kHiddenThenLinear, learning_rate, seed, use_bias), scaling};
}

InverseModelNet make_inverse_model(std::uint64_t seed, double learning_rate, int hidden,
                                   bool use_bias) {
  return {Net::random({3, hidden, 1}, kHiddenThenLinear, learning_rate, seed, use_bias)};
}

D8bv controller_action(const ControllerNet& ctl, int eps, int deps) {
  return unit_to_d8bv(forward(ctl.net, controller_input(ctl, eps, deps))(0));
}

D8bv inverse_action(const InverseModelNet& inv, const IlluminanceTriple& desired) {
  return unit_to_d8bv(forward(inv.net, triple_input(desired))(0));
}

double train_controller(ControllerNet& ctl, int eps_prev, int deps_prev, D8bv u_im) {
  const Eigen::Matrix<double, 1, 1> target(scale_to_unit(u_im));
  return train_step(ctl.net, controller_input(ctl, eps_prev, deps_prev), target);
}

double train_inverse(InverseModelNet& inv, const IlluminanceTriple& measured, D8bv u_target) {
  const Eigen::Matrix<double, 1, 1> target(scale_to_unit(u_target));
  return train_step(inv.net, triple_input(measured), target);
}

StepRecord loop_step(LoopState& state, ControllerNet& ctl, InverseModelNet& inv,
                     const ProcessLut& lut, D8bv e_desired, D8bv e_daylight,
                     const LoopOptions& options, const PhaseObserver& observer) {
  if (options.plant_delay != 0 && options.plant_delay != 1)
    throw std::invalid_argument("plant_delay must be 0 or 1");
  if (options.inverse_target_lag != 0 && options.inverse_target_lag != 1)
    throw std::invalid_argument("inverse_target_lag must be 0 or 1");

  StepRecord rec;
  rec.k = state.k;
  rec.e_desired = e_desired;
  rec.e_daylight = e_daylight;

  auto measure = [&](D8bv applied) {
    rec.e_electric = lut(applied);
    rec.e_measured = clamp8_sum(rec.e_electric, e_daylight);
    rec.eps = e_desired.value() - rec.e_measured.value();
    rec.deps = rec.eps - state.eps_prev;
    notify(observer, StepPhase::Measured);
  };

  if (options.plant_delay == 1) {
    measure(state.u_prev);
    rec.u = controller_action(ctl, rec.eps, rec.deps);
    notify(observer, StepPhase::CommandIssued);
  } else {
    rec.u = controller_action(ctl, state.eps_prev, state.deps_prev);
    notify(observer, StepPhase::CommandIssued);
    measure(rec.u);
  }

  if (state.k == 0) {
    state.measured.fill(rec.e_measured);
    state.desired.fill(e_desired);
  } else {
    state.measured = {rec.e_measured, state.measured[0], state.measured[1]};
    state.desired = {e_desired, state.desired[0], state.desired[1]};
  }

  const D8bv u_target = options.inverse_target_lag == 0 ? rec.u : state.u_prev;
  rec.loss_inverse = train_inverse(inv, state.measured, u_target);
  notify(observer, StepPhase::InverseTrained);

  rec.u_im = inverse_action(inv, state.desired);
  notify(observer, StepPhase::InverseQueried);

  if (state.k > 0) {
    rec.loss_controller = train_controller(ctl, state.eps_prev, state.deps_prev, rec.u_im);
    notify(observer, StepPhase::ControllerTrained);
  } else {
    notify(observer, StepPhase::ControllerSkipped);
  }

  state.eps_prev = rec.eps;
  state.deps_prev = rec.deps;
  state.u_prev = rec.u;
  ++state.k;
  return rec;
}

SimulationResult simulate(const SimulationSetup& setup) {
  SimulationResult result{
      {},
      make_controller(setup.seed_controller, setup.gamma_controller, setup.hidden_controller,
                      setup.use_bias, setup.error_scaling),
      make_inverse_model(setup.seed_inverse, setup.gamma_inverse, setup.hidden_inverse,
                         setup.use_bias)};
  result.records.reserve(setup.daylight.size());
  LoopState state;
  for (std::size_t k = 0; k < setup.daylight.size(); ++k)
    result.records.push_back(loop_step(state, result.controller, result.inverse, setup.lut,
                                       setup.e_desired, setup.daylight[k], setup.options));
  return result;
}

} // namespace alcs
