#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mamc {

struct EnvSpec {
  std::string name;
  int obs_dim = 0;
  int act_dim = 0;
  std::vector<double> action_low, action_high;
  int horizon = 0;
};

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;  // reached an absorbing state; no bootstrap
  bool truncated = false;   // hit the time limit only; bootstrap continues
};

// Deterministic single-agent control environment. Actions are clipped to the
// spec bounds inside step, so callers may emit raw noisy actions.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  virtual StepResult step(std::span<const double> action) = 0;
};

// Known names: "pendulum", "pointmass", "mountaincar".
std::unique_ptr<Env> make_env(const std::string& name);

// Mean undiscounted return of uniform-random actions over full episodes.
double random_policy_return(Env& env, std::uint64_t seed, int episodes);

}  // namespace mamc
