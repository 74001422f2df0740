// Backprop against central differences over random 2-3-1 and 3-3-1 networks.

#ifndef ALCS_GRADCHECK_HPP
#define ALCS_GRADCHECK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "alcs/random.hpp"
#include "alcs/tinynet.hpp"

namespace alcs {

struct GradCheckResult {
  int trials = 0;
  double max_relative_error = 0.0;
};

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-5;

/// Trials alternate between [2, 3, 1] and [3, 3, 1] networks with parameters,
/// inputs and targets uniform on [-1, 1). The relative error of each gradient
/// entry is |analytic - numeric| / max(|analytic|, 1e-8).
template <typename Scalar = double>
GradCheckResult gradient_check(std::uint64_t seed, int trials, Scalar h = Scalar(kGradCheckStep)) {
  using Vector = typename Mlp<Scalar>::Vector;
  SeededUniform rng(seed);
  auto fill = [&](Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = static_cast<Scalar>(rng.uniform(-1.0, 1.0));
  };
  GradCheckResult result;
  for (int t = 0; t < trials; ++t) {
    const int inputs = t % 2 == 0 ? 2 : 3;
    Mlp<Scalar> net({inputs, 3, 1}, {Activation::HyperbolicTangent, Activation::Linear},
                    Scalar(0.15));
    Vector params(net.parameter_count()), input(inputs), target(1);
    fill(params);
    fill(input);
    fill(target);
    net.set_parameters(params);

    Vector analytic;
    backprop(net, input, target, analytic);
    const Vector numeric = numeric_gradient(net, input, target, h);
    for (Eigen::Index p = 0; p < analytic.size(); ++p) {
      const double denom = std::max<double>(std::abs(analytic(p)), 1e-8);
      result.max_relative_error =
          std::max(result.max_relative_error, double(std::abs(analytic(p) - numeric(p))) / denom);
    }
    ++result.trials;
  }
  return result;
}

} // namespace alcs

#endif // ALCS_GRADCHECK_HPP
