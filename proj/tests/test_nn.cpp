#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "doctest.h"
#include "mamc/nn.hpp"

using namespace mamc;

namespace {

bool close_grads(const ParamVector& a, const ParamVector& b, double rtol, double atol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    if (diff > atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]))) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("param_count counts weights and biases per layer") {
  MlpSpec s;
  s.widths = {3, 64, 64, 1};
  CHECK(s.param_count() == 4481);  // (3*64+64) + (64*64+64) + (64*1+1)
  MlpSpec t;
  t.widths = {2, 1};
  CHECK(t.param_count() == 3);
}

TEST_CASE("validate rejects malformed specs") {
  MlpSpec s;
  s.widths = {4};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.widths = {4, 0, 1};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.widths = {4, 8, 2};
  s.head = OutputHead::Bounded;  // bounds missing
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.bounds = {1.0};  // wrong arity
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.bounds = {1.0, 2.0};
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("init_params stays within the per-layer fan-in bound") {
  MlpSpec s;
  s.widths = {4, 8, 2};
  RandomStream rng(42);
  const ParamVector p = init_params(s, rng);
  REQUIRE(p.size() == s.param_count());
  const double b1 = 1.0 / std::sqrt(4.0);
  const double b2 = 1.0 / std::sqrt(8.0);
  const std::size_t layer1 = 4 * 8 + 8;
  for (std::size_t i = 0; i < layer1; ++i) CHECK(std::abs(p[i]) <= b1);
  for (std::size_t i = layer1; i < p.size(); ++i) CHECK(std::abs(p[i]) <= b2);

  RandomStream rng2(42);
  CHECK(init_params(s, rng2) == p);  // same stream, same params
}

TEST_CASE("forward matches a hand-computed dyadic example") {
  MlpSpec s;
  s.widths = {2, 2, 1};
  // layer 1: W = [[1, -1], [0.5, 0.25]], b = [0.125, -0.25]
  // layer 2: W = [[2, -3]], b = [0.5]
  const ParamVector p = {1.0, -1.0, 0.5, 0.25, 0.125, -0.25, 2.0, -3.0, 0.5};
  const std::vector<double> x = {0.25, 0.5};
  // pre1 = [-0.125, 0]; relu -> [0, 0]; out = bias = 0.5, all exact dyadics
  const std::vector<double> y = forward_one(s, p, x);
  REQUIRE(y.size() == 1);
  CHECK(y[0] == 0.5);

  // The zero pre-activation must also gate the backward pass: ReLU'(0) = 0.
  Trace tr;
  std::vector<double> out;
  forward(s, p, x, 1, out, &tr);
  ParamVector g;
  std::vector<double> gin;
  backward(s, p, tr, std::vector<double>{1.0}, &g, &gin);
  const ParamVector expect = {0, 0, 0, 0, 0, 0, 0, 0, 1.0};
  CHECK(g == expect);
  CHECK(gin == std::vector<double>{0.0, 0.0});
}

TEST_CASE("bounded head scales tanh by the per-dimension bound") {
  MlpSpec s;
  s.widths = {1, 1};
  s.head = OutputHead::Bounded;
  s.bounds = {2.0};
  const ParamVector p = {0.5, 0.25};  // w, b
  const std::vector<double> y = forward_one(s, p, std::vector<double>{1.0});
  CHECK(y[0] == doctest::Approx(2.0 * std::tanh(0.75)).epsilon(1e-15));

  Trace tr;
  std::vector<double> out;
  forward(s, p, std::vector<double>{1.0}, 1, out, &tr);
  ParamVector g;
  std::vector<double> gin;
  backward(s, p, tr, std::vector<double>{1.0}, &g, &gin);
  const double th = std::tanh(0.75);
  const double dz = 2.0 * (1.0 - th * th);
  CHECK(g[0] == doctest::Approx(dz * 1.0).epsilon(1e-14));  // dW
  CHECK(g[1] == doctest::Approx(dz).epsilon(1e-14));        // db
  CHECK(gin[0] == doctest::Approx(dz * 0.5).epsilon(1e-14));
}

TEST_CASE("batched forward is bit-identical to row-at-a-time forward") {
  MlpSpec s;
  s.widths = {3, 16, 5};
  s.head = OutputHead::Bounded;
  s.bounds = {1.0, 2.0, 0.5, 3.0, 1.5};
  RandomStream rng(7);
  const ParamVector p = init_params(s, rng);
  for (int batch : {1, 2, 7, 32}) {
    std::vector<double> in(static_cast<std::size_t>(batch) * 3);
    for (double& v : in) v = rng.uniform(-2.0, 2.0);
    std::vector<double> out;
    forward(s, p, in, batch, out);
    REQUIRE(out.size() == static_cast<std::size_t>(batch) * 5);
    for (int b = 0; b < batch; ++b) {
      const std::vector<double> row(in.begin() + b * 3, in.begin() + (b + 1) * 3);
      const std::vector<double> y = forward_one(s, p, row);
      for (int j = 0; j < 5; ++j) CHECK(out[static_cast<std::size_t>(b) * 5 + j] == y[j]);
    }
  }
}

TEST_CASE("batched backward equals the sum of per-row backwards") {
  MlpSpec s;
  s.widths = {2, 8, 3};
  RandomStream rng(19);
  const ParamVector p = init_params(s, rng);
  const int batch = 4;
  std::vector<double> in(batch * 2), dout(batch * 3);
  for (double& v : in) v = rng.uniform(-1.0, 1.0);
  for (double& v : dout) v = rng.uniform(-1.0, 1.0);

  Trace tr;
  std::vector<double> out;
  forward(s, p, in, batch, out, &tr);
  ParamVector g_batch;
  backward(s, p, tr, dout, &g_batch, nullptr);

  ParamVector g_sum(p.size(), 0.0);
  for (int b = 0; b < batch; ++b) {
    Trace tb;
    std::vector<double> ob;
    forward(s, p, std::span<const double>(in.data() + b * 2, 2), 1, ob, &tb);
    ParamVector gb;
    backward(s, p, tb, std::span<const double>(dout.data() + b * 3, 3), &gb, nullptr);
    for (std::size_t i = 0; i < gb.size(); ++i) g_sum[i] += gb[i];
  }
  CHECK(close_grads(g_batch, g_sum, 1e-12, 1e-12));
}

TEST_CASE("critic loss value and gradient match the mean squared error") {
  MlpSpec s;
  s.widths = {2, 6, 1};
  RandomStream rng(23);
  const ParamVector p = init_params(s, rng);
  const int batch = 3;
  std::vector<double> in(batch * 2), targets(batch);
  for (double& v : in) v = rng.uniform(-1.0, 1.0);
  for (double& v : targets) v = rng.uniform(-1.0, 1.0);

  const LossGrad lg = critic_loss_grad(s, p, in, batch, targets);
  double mse = 0.0;
  for (int b = 0; b < batch; ++b) {
    const std::vector<double> row(in.begin() + b * 2, in.begin() + (b + 1) * 2);
    const double d = forward_one(s, p, row)[0] - targets[b];
    mse += d * d;
  }
  mse /= batch;
  CHECK(lg.value == doctest::Approx(mse).epsilon(1e-13));

  const ParamVector fd = finite_difference_grad(p, [&](const ParamVector& pp) {
    std::vector<double> out;
    forward(s, pp, in, batch, out);
    double loss = 0.0;
    for (int b = 0; b < batch; ++b) loss += (out[b] - targets[b]) * (out[b] - targets[b]);
    return loss / batch;
  });
  CHECK(close_grads(lg.grad, fd, 1e-6, 1e-8));
}

TEST_CASE("actor objective value and gradient match Q of the policy action") {
  MlpSpec actor;
  actor.widths = {2, 6, 2};
  actor.head = OutputHead::Bounded;
  actor.bounds = {1.5, 0.5};
  MlpSpec critic;
  critic.widths = {4, 8, 1};
  RandomStream rng(29);
  const ParamVector ap = init_params(actor, rng);
  const ParamVector cp = init_params(critic, rng);
  const int batch = 3;
  std::vector<double> states(batch * 2);
  for (double& v : states) v = rng.uniform(-1.0, 1.0);

  const auto objective = [&](const ParamVector& a) {
    double sum = 0.0;
    for (int b = 0; b < batch; ++b) {
      const std::vector<double> s(states.begin() + b * 2, states.begin() + (b + 1) * 2);
      const std::vector<double> act = forward_one(actor, a, s);
      std::vector<double> sa = s;
      sa.insert(sa.end(), act.begin(), act.end());
      sum += forward_one(critic, cp, sa)[0];
    }
    return sum / batch;
  };

  const LossGrad lg = actor_objective_grad(actor, ap, critic, cp, states, batch);
  CHECK(lg.value == doctest::Approx(objective(ap)).epsilon(1e-13));
  const ParamVector fd = finite_difference_grad(ap, objective);
  CHECK(close_grads(lg.grad, fd, 1e-6, 1e-8));
}

TEST_CASE("adam first step is bias-corrected sign descent") {
  ParamVector p = {1.0, 2.0};
  const ParamVector g = {0.5, -0.25};
  AdamState st;
  st.lr = 0.1;
  adam_step(p, g, st);
  CHECK(st.t == 1);
  // mhat = g, vhat = g^2, so the step is lr * g / (|g| + eps)
  CHECK(p[0] == doctest::Approx(1.0 - 0.1 * 0.5 / (0.5 + 1e-8)).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(2.0 + 0.1 * 0.25 / (0.25 + 1e-8)).epsilon(1e-12));
}

TEST_CASE("adam rejects non-finite gradients") {
  ParamVector p = {1.0};
  AdamState st;
  CHECK_THROWS_AS(adam_step(p, {std::numeric_limits<double>::quiet_NaN()}, st),
                  std::invalid_argument);
  CHECK_THROWS_AS(adam_step(p, {std::numeric_limits<double>::infinity()}, st),
                  std::invalid_argument);
}

TEST_CASE("soft_update blends target toward online") {
  ParamVector target = {0.0, 10.0};
  const ParamVector online = {1.0, 0.0};
  soft_update(target, online, 0.25);
  CHECK(target == ParamVector{0.25, 7.5});
  soft_update(target, online, 1.0);
  CHECK(target == online);
}

TEST_CASE("finite differences are exact on a quadratic") {
  const ParamVector p = {2.0, -1.0};
  const ParamVector g = finite_difference_grad(
      p, [](const ParamVector& q) { return q[0] * q[0] + 3.0 * q[1] * q[1]; });
  CHECK(g[0] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(g[1] == doctest::Approx(-6.0).epsilon(1e-9));
}

}  // TEST_SUITE
