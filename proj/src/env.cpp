#include "mamc/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mamc/rng.hpp"

namespace mamc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// Wrap an angle into (-pi, pi].
double wrap_angle(double theta) {
  double r = std::fmod(theta + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

class EnvBase : public Env {
 public:
  const EnvSpec& spec() const override { return spec_; }

  std::vector<double> reset(std::uint64_t seed) override {
    rng_ = RandomStream(seed);
    steps_ = 0;
    done_ = false;
    live_ = true;
    reset_state();
    return observe();
  }

  StepResult step(std::span<const double> action) override {
    if (!live_) throw std::logic_error("step before reset");
    if (done_) throw std::logic_error("episode finished, reset required");
    if (action.size() != static_cast<std::size_t>(spec_.act_dim)) {
      throw std::invalid_argument("action dimension mismatch");
    }
    std::vector<double> a(action.begin(), action.end());
    for (int i = 0; i < spec_.act_dim; ++i) {
      a[static_cast<std::size_t>(i)] =
          clip(a[static_cast<std::size_t>(i)], spec_.action_low[static_cast<std::size_t>(i)],
               spec_.action_high[static_cast<std::size_t>(i)]);
    }

    StepResult r;
    r.reward = dynamics(a, &r.terminated);
    steps_ += 1;
    r.truncated = !r.terminated && steps_ >= spec_.horizon;
    done_ = r.terminated || r.truncated;
    r.observation = observe();
    return r;
  }

 protected:
  virtual void reset_state() = 0;
  virtual std::vector<double> observe() const = 0;
  // Applies one step of the (already clipped) action, returns the reward.
  virtual double dynamics(const std::vector<double>& action, bool* terminated) = 0;

  EnvSpec spec_;
  RandomStream rng_;
  int steps_ = 0;
  bool done_ = false;
  bool live_ = false;
};

// Torque-limited swing-up pendulum, classic control dynamics. Reward is
// evaluated on the pre-step state with the applied torque.
class PendulumEnv final : public EnvBase {
 public:
  PendulumEnv() {
    spec_.name = "pendulum";
    spec_.obs_dim = 3;
    spec_.act_dim = 1;
    spec_.action_low = {-2.0};
    spec_.action_high = {2.0};
    spec_.horizon = 200;
  }

 protected:
  void reset_state() override {
    theta_ = rng_.uniform(-kPi, kPi);
    theta_dot_ = rng_.uniform(-1.0, 1.0);
  }

  std::vector<double> observe() const override {
    return {std::cos(theta_), std::sin(theta_), theta_dot_};
  }

  double dynamics(const std::vector<double>& action, bool* terminated) override {
    constexpr double g = 10.0, m = 1.0, l = 1.0, dt = 0.05;
    const double u = action[0];
    const double th = wrap_angle(theta_);
    const double cost = th * th + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

    theta_dot_ += 3.0 * g / (2.0 * l) * std::sin(theta_) * dt + 3.0 / (m * l * l) * u * dt;
    theta_dot_ = clip(theta_dot_, -8.0, 8.0);
    theta_ += theta_dot_ * dt;

    *terminated = false;
    return -cost;
  }

 private:
  double theta_ = 0.0, theta_dot_ = 0.0;
};

// Velocity-damped point mass on a 2D plane chasing a goal on the unit circle.
class PointMassEnv final : public EnvBase {
 public:
  PointMassEnv() {
    spec_.name = "pointmass";
    spec_.obs_dim = 6;
    spec_.act_dim = 2;
    spec_.action_low = {-1.0, -1.0};
    spec_.action_high = {1.0, 1.0};
    spec_.horizon = 200;
  }

 protected:
  void reset_state() override {
    pos_[0] = pos_[1] = 0.0;
    vel_[0] = vel_[1] = 0.0;
    const double angle = rng_.uniform(0.0, 2.0 * kPi);
    goal_[0] = std::cos(angle);
    goal_[1] = std::sin(angle);
  }

  std::vector<double> observe() const override {
    return {pos_[0], pos_[1], vel_[0], vel_[1], goal_[0], goal_[1]};
  }

  double dynamics(const std::vector<double>& action, bool* terminated) override {
    for (int i = 0; i < 2; ++i) {
      vel_[i] = clip(0.95 * vel_[i] + 0.1 * action[static_cast<std::size_t>(i)], -1.0, 1.0);
      pos_[i] = clip(pos_[i] + 0.05 * vel_[i], -2.0, 2.0);
    }
    const double dx = pos_[0] - goal_[0];
    const double dy = pos_[1] - goal_[1];
    const double dist = std::sqrt(dx * dx + dy * dy);
    double reward = -dist;
    *terminated = dist < 0.05;
    if (*terminated) reward += 10.0;
    return reward;
  }

 private:
  double pos_[2] = {0.0, 0.0}, vel_[2] = {0.0, 0.0}, goal_[2] = {1.0, 0.0};
};

// Underpowered car in a valley; continuous mountain car with control cost.
class MountainCarEnv final : public EnvBase {
 public:
  MountainCarEnv() {
    spec_.name = "mountaincar";
    spec_.obs_dim = 2;
    spec_.act_dim = 1;
    spec_.action_low = {-1.0};
    spec_.action_high = {1.0};
    spec_.horizon = 999;
  }

 protected:
  void reset_state() override {
    pos_ = rng_.uniform(-0.6, -0.4);
    vel_ = 0.0;
  }

  std::vector<double> observe() const override { return {pos_, vel_}; }

  double dynamics(const std::vector<double>& action, bool* terminated) override {
    const double a = action[0];
    vel_ = clip(vel_ + 0.0015 * a - 0.0025 * std::cos(3.0 * pos_), -0.07, 0.07);
    pos_ = clip(pos_ + vel_, -1.2, 0.6);
    double reward = -0.1 * a * a;
    *terminated = pos_ >= 0.45;
    if (*terminated) reward += 100.0;
    return reward;
  }

 private:
  double pos_ = -0.5, vel_ = 0.0;
};

}  // namespace

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "pendulum") return std::make_unique<PendulumEnv>();
  if (name == "pointmass") return std::make_unique<PointMassEnv>();
  if (name == "mountaincar") return std::make_unique<MountainCarEnv>();
  throw std::invalid_argument("unknown environment: " + name);
}

double random_policy_return(Env& env, std::uint64_t seed, int episodes) {
  if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
  RandomStream rng(mix64(seed));
  const EnvSpec& spec = env.spec();
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    env.reset(mix64(seed + static_cast<std::uint64_t>(e) + 1));
    double ep = 0.0;
    std::vector<double> a(static_cast<std::size_t>(spec.act_dim));
    while (true) {
      for (int i = 0; i < spec.act_dim; ++i) {
        a[static_cast<std::size_t>(i)] = rng.uniform(spec.action_low[static_cast<std::size_t>(i)],
                                                     spec.action_high[static_cast<std::size_t>(i)]);
      }
      StepResult r = env.step(a);
      ep += r.reward;
      if (r.terminated || r.truncated) break;
    }
    total += ep;
  }
  return total / static_cast<double>(episodes);
}

}  // namespace mamc
