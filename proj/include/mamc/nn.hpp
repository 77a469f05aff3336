#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mamc/rng.hpp"

namespace mamc {

enum class OutputHead { Linear, Bounded };

// Fully connected network shape. widths = {input, hidden..., output}; hidden
// activations are ReLU. Linear head for value outputs; Bounded head squashes
// each output through tanh and scales it by a per-dimension bound, for
// symmetric action ranges.
struct MlpSpec {
  std::vector<int> widths;
  OutputHead head = OutputHead::Linear;
  std::vector<double> bounds;  // per output dim, required iff head == Bounded

  int input_width() const { return widths.front(); }
  int output_width() const { return widths.back(); }
  int layer_count() const { return static_cast<int>(widths.size()) - 1; }
  std::size_t param_count() const;
  void validate() const;  // throws std::invalid_argument
};

// Flat parameter storage. Layout per layer: weights row-major (fan_out rows of
// fan_in), then fan_out biases. Layers in order.
using ParamVector = std::vector<double>;

// Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer, weights first,
// then biases, drawn in layout order.
ParamVector init_params(const MlpSpec& spec, RandomStream& rng);

// Per-layer activations kept by forward for the backward pass. Reusable
// between calls to avoid churn in hot loops.
struct Trace {
  int batch = 0;
  std::vector<std::vector<double>> act;  // act[l]: batch x widths[l], l = 0..L
  std::vector<std::vector<double>> pre;  // pre[l]: batch x widths[l+1]
};

// Batched forward. in is row-major batch x input_width; out is resized to
// batch x output_width. Row b of the output depends only on row b of the
// input, with identical arithmetic for any batch size.
void forward(const MlpSpec& spec, const ParamVector& params, std::span<const double> in,
             int batch, std::vector<double>& out, Trace* trace = nullptr);

std::vector<double> forward_one(const MlpSpec& spec, const ParamVector& params,
                                std::span<const double> in);

// Reverse-mode pass from dL/d(output) (row-major batch x output_width).
// Writes the parameter gradient (zeroed first) and, when requested, the
// gradient with respect to the input batch.
void backward(const MlpSpec& spec, const ParamVector& params, const Trace& trace,
              std::span<const double> dout, ParamVector* param_grad,
              std::vector<double>* input_grad);

struct LossGrad {
  double value = 0.0;
  ParamVector grad;
};

// Mean squared error (1/B) sum_b (net(x_b) - y_b)^2 for a scalar-output net,
// with its exact parameter gradient.
LossGrad critic_loss_grad(const MlpSpec& critic_spec, const ParamVector& critic,
                          std::span<const double> inputs, int batch,
                          std::span<const double> targets);

// Deterministic policy objective J = (1/B) sum_b Q(s_b, pi(s_b)) and dJ/dphi,
// chaining dQ/da through the actor. Critic input layout is [state, action].
LossGrad actor_objective_grad(const MlpSpec& actor_spec, const ParamVector& actor,
                              const MlpSpec& critic_spec, const ParamVector& critic,
                              std::span<const double> states, int batch);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t t = 0;
  std::vector<double> m, v;
};

// Bias-corrected Adam, minimizing. Throws on non-finite gradient entries.
void adam_step(ParamVector& params, const ParamVector& grad, AdamState& state);

// target <- tau * online + (1 - tau) * target
void soft_update(ParamVector& target, const ParamVector& online, double tau);

// Central differences (f(p+h) - f(p-h)) / 2h per coordinate. Oracle for the
// analytic gradients; h defaults to 1e-5 on doubles.
ParamVector finite_difference_grad(const ParamVector& params,
                                   const std::function<double(const ParamVector&)>& f,
                                   double h = 1e-5);

}  // namespace mamc
