// Small multilayer perceptron with single-sample online backpropagation.
//
// Each non-input layer computes activation(W * x + b). Parameters are
// addressed as one flat vector, layer by layer: the weight matrix row-major
// (neuron, then input), followed by that layer's biases. Gradients, numeric
// gradients and the text format all use this order.

#ifndef ALCS_TINYNET_HPP
#define ALCS_TINYNET_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "alcs/random.hpp"

namespace alcs {

enum class Activation { HyperbolicTangent, Linear };

template <typename Scalar>
Scalar activate(Activation kind, Scalar x) {
  return kind == Activation::HyperbolicTangent ? std::tanh(x) : x;
}

/// Slope of the activation expressed through its output y = activate(kind, x).
template <typename Scalar>
Scalar activation_derivative(Activation kind, Scalar y) {
  return kind == Activation::HyperbolicTangent ? Scalar(1) - y * y : Scalar(1);
}

inline const char* activation_name(Activation kind) {
  return kind == Activation::HyperbolicTangent ? "tanh" : "linear";
}

inline Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::HyperbolicTangent;
  if (name == "linear") return Activation::Linear;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

template <typename Scalar = double>
class Mlp {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Layer {
    Matrix weights;  // neurons x inputs
    Vector biases;
    Activation activation;
  };

  /// All weights and biases start at zero.
  Mlp(std::vector<int> widths, std::vector<Activation> activations, Scalar learning_rate,
      bool use_bias = true)
      : widths_(std::move(widths)), learning_rate_(learning_rate), use_bias_(use_bias) {
    if (widths_.size() < 2) throw std::invalid_argument("an MLP needs at least two layer widths");
    for (int w : widths_)
      if (w < 1) throw std::invalid_argument("layer widths must be positive");
    if (activations.size() != widths_.size() - 1)
      throw std::invalid_argument("expected one activation per non-input layer");
    if (!(learning_rate > Scalar(0)) || !std::isfinite(learning_rate))
      throw std::invalid_argument("learning rate must be positive and finite");
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l)
      layers_.push_back({Matrix::Zero(widths_[l + 1], widths_[l]), Vector::Zero(widths_[l + 1]),
                         activations[l]});
  }

  /// Weights (and biases, when enabled) drawn i.i.d. uniform on [-0.5, 0.5).
  static Mlp random(std::vector<int> widths, std::vector<Activation> activations,
                    Scalar learning_rate, std::uint64_t seed, bool use_bias = true) {
    Mlp net(std::move(widths), std::move(activations), learning_rate, use_bias);
    SeededUniform rng(seed);
    for (auto& layer : net.layers_) {
      for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j)
          layer.weights(i, j) = static_cast<Scalar>(rng.uniform(-0.5, 0.5));
      if (use_bias)
        for (Eigen::Index i = 0; i < layer.biases.size(); ++i)
          layer.biases(i) = static_cast<Scalar>(rng.uniform(-0.5, 0.5));
    }
    return net;
  }

  const std::vector<int>& widths() const { return widths_; }
  int input_width() const { return widths_.front(); }
  int output_width() const { return widths_.back(); }
  const std::vector<Layer>& layers() const { return layers_; }
  Scalar learning_rate() const { return learning_rate_; }
  bool use_bias() const { return use_bias_; }

  void set_learning_rate(Scalar rate) {
    if (!(rate > Scalar(0)) || !std::isfinite(rate))
      throw std::invalid_argument("learning rate must be positive and finite");
    learning_rate_ = rate;
  }

  Eigen::Index parameter_count() const {
    Eigen::Index n = 0;
    for (const auto& layer : layers_) n += layer.weights.size() + layer.biases.size();
    return n;
  }

  Vector parameters() const {
    Vector flat(parameter_count());
    Eigen::Index at = 0;
    for (const auto& layer : layers_) {
      for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) flat(at++) = layer.weights(i, j);
      flat.segment(at, layer.biases.size()) = layer.biases;
      at += layer.biases.size();
    }
    return flat;
  }

  /// Bias entries are ignored (biases stay zero) when use_bias() is false.
  template <typename Derived>
  void set_parameters(const Eigen::MatrixBase<Derived>& flat) {
    if (flat.size() != parameter_count())
      throw std::invalid_argument("parameter vector has the wrong length");
    Eigen::Index at = 0;
    for (auto& layer : layers_) {
      for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) layer.weights(i, j) = flat(at++);
      if (use_bias_) layer.biases = flat.segment(at, layer.biases.size());
      at += layer.biases.size();
    }
  }

  /// True when flat index `p` addresses a bias.
  bool is_bias_index(Eigen::Index p) const {
    Eigen::Index at = 0;
    for (const auto& layer : layers_) {
      at += layer.weights.size();
      if (p < at) return false;
      at += layer.biases.size();
      if (p < at) return true;
    }
    return false;
  }

  template <typename Derived>
  void apply_gradient(const Eigen::MatrixBase<Derived>& gradient) {
    Vector flat = parameters();
    flat.noalias() -= learning_rate_ * gradient;
    set_parameters(flat);
  }

  bool operator==(const Mlp& other) const {
    return widths_ == other.widths_ && learning_rate_ == other.learning_rate_ &&
           use_bias_ == other.use_bias_ && activations() == other.activations() &&
           parameters() == other.parameters();
  }

  std::vector<Activation> activations() const {
    std::vector<Activation> out;
    for (const auto& layer : layers_) out.push_back(layer.activation);
    return out;
  }

private:
  std::vector<int> widths_;
  std::vector<Layer> layers_;
  Scalar learning_rate_;
  bool use_bias_;
};

/// Per-layer outputs of one forward pass. outputs[0] is the input itself,
/// outputs[l + 1] the output of non-input layer l.
template <typename Scalar>
struct ForwardTrace {
  std::vector<typename Mlp<Scalar>::Vector> outputs;
};

namespace detail {

template <typename Scalar, typename Derived>
void check_input(const Mlp<Scalar>& net, const Eigen::MatrixBase<Derived>& input) {
  if (input.size() != net.input_width())
    throw std::invalid_argument("input has length " + std::to_string(input.size()) +
                                ", network expects " + std::to_string(net.input_width()));
}

template <typename Scalar, typename Derived>
void check_target(const Mlp<Scalar>& net, const Eigen::MatrixBase<Derived>& target) {
  if (target.size() != net.output_width())
    throw std::invalid_argument("target has length " + std::to_string(target.size()) +
                                ", network expects " + std::to_string(net.output_width()));
}

} // namespace detail

template <typename Scalar, typename Derived>
typename Mlp<Scalar>::Vector forward(const Mlp<Scalar>& net,
                                     const Eigen::MatrixBase<Derived>& input,
                                     ForwardTrace<Scalar>& trace) {
  detail::check_input(net, input);
  trace.outputs.clear();
  trace.outputs.emplace_back(input);
  for (const auto& layer : net.layers()) {
    typename Mlp<Scalar>::Vector z = layer.weights * trace.outputs.back() + layer.biases;
    trace.outputs.emplace_back(
        z.unaryExpr([&](Scalar v) { return activate(layer.activation, v); }));
  }
  return trace.outputs.back();
}

template <typename Scalar, typename Derived>
typename Mlp<Scalar>::Vector forward(const Mlp<Scalar>& net,
                                     const Eigen::MatrixBase<Derived>& input) {
  ForwardTrace<Scalar> trace;
  return forward(net, input, trace);
}

/// Half squared error of the network output against `target`.
template <typename Scalar, typename DerivedIn, typename DerivedOut>
Scalar loss(const Mlp<Scalar>& net, const Eigen::MatrixBase<DerivedIn>& input,
            const Eigen::MatrixBase<DerivedOut>& target) {
  detail::check_target(net, target);
  return Scalar(0.5) * (forward(net, input) - target).squaredNorm();
}

/// Analytic gradient of the half squared error in flat parameter order.
/// Returns the loss at the current parameters.
template <typename Scalar, typename DerivedIn, typename DerivedOut>
Scalar backprop(const Mlp<Scalar>& net, const Eigen::MatrixBase<DerivedIn>& input,
                const Eigen::MatrixBase<DerivedOut>& target,
                typename Mlp<Scalar>::Vector& gradient) {
  using Vector = typename Mlp<Scalar>::Vector;
  detail::check_target(net, target);
  ForwardTrace<Scalar> trace;
  const Vector output = forward(net, input, trace);
  const Vector error = output - target;

  const auto& layers = net.layers();
  const std::size_t depth = layers.size();
  std::vector<Vector> deltas(depth);
  {
    const auto& top = layers.back();
    deltas.back() = error.binaryExpr(output, [&](Scalar e, Scalar y) {
      return e * activation_derivative(top.activation, y);
    });
  }
  for (std::size_t l = depth - 1; l-- > 0;) {
    const Vector back = layers[l + 1].weights.transpose() * deltas[l + 1];
    const Vector& y = trace.outputs[l + 1];
    deltas[l] = back.binaryExpr(
        y, [&](Scalar b, Scalar v) { return b * activation_derivative(layers[l].activation, v); });
  }

  gradient.resize(net.parameter_count());
  Eigen::Index at = 0;
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = layers[l];
    const Vector& x = trace.outputs[l];
    for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
      for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) gradient(at++) = deltas[l](i) * x(j);
    if (net.use_bias())
      gradient.segment(at, layer.biases.size()) = deltas[l];
    else
      gradient.segment(at, layer.biases.size()).setZero();
    at += layer.biases.size();
  }
  return Scalar(0.5) * error.squaredNorm();
}

/// One gradient-descent update on a single sample. Returns the loss measured
/// before the update.
template <typename Scalar, typename DerivedIn, typename DerivedOut>
Scalar train_step(Mlp<Scalar>& net, const Eigen::MatrixBase<DerivedIn>& input,
                  const Eigen::MatrixBase<DerivedOut>& target) {
  typename Mlp<Scalar>::Vector gradient;
  const Scalar before = backprop(net, input, target, gradient);
  net.apply_gradient(gradient);
  return before;
}

/// Central-difference estimate of the loss gradient. Bias entries of a
/// bias-free network are reported as zero.
template <typename Scalar, typename DerivedIn, typename DerivedOut>
typename Mlp<Scalar>::Vector numeric_gradient(const Mlp<Scalar>& net,
                                              const Eigen::MatrixBase<DerivedIn>& input,
                                              const Eigen::MatrixBase<DerivedOut>& target,
                                              Scalar h) {
  if (!(h > Scalar(0))) throw std::invalid_argument("finite-difference step must be positive");
  const typename Mlp<Scalar>::Vector base = net.parameters();
  typename Mlp<Scalar>::Vector estimate = Mlp<Scalar>::Vector::Zero(base.size());
  Mlp<Scalar> probe = net;
  for (Eigen::Index p = 0; p < base.size(); ++p) {
    if (!net.use_bias() && net.is_bias_index(p)) continue;
    typename Mlp<Scalar>::Vector shifted = base;
    shifted(p) = base(p) + h;
    probe.set_parameters(shifted);
    const Scalar up = loss(probe, input, target);
    shifted(p) = base(p) - h;
    probe.set_parameters(shifted);
    const Scalar down = loss(probe, input, target);
    estimate(p) = (up - down) / (Scalar(2) * h);
  }
  return estimate;
}

// Text format:
//   mlp widths 2 3 1 activations tanh linear learning_rate 0.15 use_bias 1
//   followed by one parameter per line in flat order, %.17g.

template <typename Scalar>
void write_text(const Mlp<Scalar>& net, std::ostream& out) {
  char buf[64];
  out << "mlp widths";
  for (int w : net.widths()) out << ' ' << w;
  out << " activations";
  for (const auto& layer : net.layers()) out << ' ' << activation_name(layer.activation);
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(net.learning_rate()));
  out << " learning_rate " << buf << " use_bias " << (net.use_bias() ? 1 : 0) << '\n';
  const auto flat = net.parameters();
  for (Eigen::Index p = 0; p < flat.size(); ++p) {
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(flat(p)));
    out << buf << '\n';
  }
}

template <typename Scalar = double>
Mlp<Scalar> read_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("missing network header line");
  std::istringstream hs(header);
  std::string word;
  hs >> word;
  if (word != "mlp") throw std::runtime_error("network header must start with 'mlp'");
  hs >> word;
  if (word != "widths") throw std::runtime_error("expected 'widths' in network header");
  std::vector<int> widths;
  while (hs >> word && word != "activations") widths.push_back(std::stoi(word));
  std::vector<Activation> activations;
  while (hs >> word && word != "learning_rate") activations.push_back(activation_from_name(word));
  double rate = 0.0;
  int bias = 1;
  if (!(hs >> rate >> word >> bias) || word != "use_bias")
    throw std::runtime_error("malformed network header");
  Mlp<Scalar> net(widths, activations, static_cast<Scalar>(rate), bias != 0);
  typename Mlp<Scalar>::Vector flat(net.parameter_count());
  for (Eigen::Index p = 0; p < flat.size(); ++p) {
    double v = 0.0;
    if (!(in >> v)) throw std::runtime_error("network file ended before all parameters were read");
    flat(p) = static_cast<Scalar>(v);
  }
  net.set_parameters(flat);
  return net;
}

} // namespace alcs

#endif // ALCS_TINYNET_HPP
