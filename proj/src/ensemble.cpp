#include "mamc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mamc {

double quantile_inplace(std::span<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double quantile(std::vector<double> values, double q) {
  return quantile_inplace(std::span<double>(values), q);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

namespace {

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

double actor_target_value(const MlpSpec& actor_spec, const ParamVector& actor,
                          const MlpSpec& critic_spec,
                          const std::vector<ParamVector>& target_critics,
                          std::span<const double> next_state, const EnsembleConfig& cfg,
                          RandomStream& noise) {
  if (target_critics.empty()) throw std::invalid_argument("need at least one target critic");

  std::vector<double> action = forward_one(actor_spec, actor, next_state);
  for (std::size_t d = 0; d < action.size(); ++d) {
    action[d] += noise.normal(0.0, cfg.target_noise_std);
    if (actor_spec.head == OutputHead::Bounded) {
      action[d] = clip(action[d], -actor_spec.bounds[d], actor_spec.bounds[d]);
    }
  }

  std::vector<double> sa(next_state.begin(), next_state.end());
  sa.insert(sa.end(), action.begin(), action.end());

  std::vector<double> values;
  values.reserve(target_critics.size());
  for (const ParamVector& theta : target_critics) {
    values.push_back(forward_one(critic_spec, theta, sa)[0]);
  }
  return quantile(std::move(values), cfg.q);
}

double ensemble_target_value(const MlpSpec& actor_spec, const std::vector<ParamVector>& actors,
                             const MlpSpec& critic_spec,
                             const std::vector<ParamVector>& target_critics,
                             std::span<const double> next_state, const EnsembleConfig& cfg,
                             RandomStream& noise) {
  if (actors.empty()) throw std::invalid_argument("need at least one actor");
  std::vector<double> per_actor;
  per_actor.reserve(actors.size());
  for (const ParamVector& phi : actors) {
    per_actor.push_back(
        actor_target_value(actor_spec, phi, critic_spec, target_critics, next_state, cfg, noise));
  }
  return median(std::move(per_actor));
}

double td_target(double reward, bool terminated, double next_value, const EnsembleConfig& cfg) {
  if (terminated) return reward;
  return reward + cfg.gamma * next_value;
}

double ensemble_state_value(const MlpSpec& actor_spec, const ParamVector& actor,
                            const MlpSpec& critic_spec, const std::vector<ParamVector>& critics,
                            std::span<const double> state, double q) {
  if (critics.empty()) throw std::invalid_argument("need at least one critic");

  const std::vector<double> action = forward_one(actor_spec, actor, state);
  std::vector<double> sa(state.begin(), state.end());
  sa.insert(sa.end(), action.begin(), action.end());

  std::vector<double> values;
  values.reserve(critics.size());
  for (const ParamVector& theta : critics) {
    values.push_back(forward_one(critic_spec, theta, sa)[0]);
  }
  return quantile(std::move(values), q);
}

}  // namespace mamc
