#pragma once

#include <span>
#include <vector>

#include "mamc/nn.hpp"
#include "mamc/rng.hpp"

namespace mamc {

// Linearly interpolated sample quantile on the sorted values: with n values
// and h = q * (n - 1), returns x[floor(h)] + (h - floor(h)) * (x[ceil(h)] -
// x[floor(h)]). q = 0.5 is the median.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);

// Same quantile, sorting the given span in place. For scratch buffers in hot
// loops; identical arithmetic to quantile().
double quantile_inplace(std::span<double> values, double q);

struct EnsembleConfig {
  double q = 0.2;                 // quantile across critics
  double gamma = 0.99;            // discount
  double target_noise_std = 0.1;  // smoothing noise on target actions
};

// One actor's view of the next-state value: perturb its action with Gaussian
// noise (clipped to the action bounds), evaluate every target critic there,
// and take the q-quantile. Draws act_dim noise values per call.
double actor_target_value(const MlpSpec& actor_spec, const ParamVector& actor,
                          const MlpSpec& critic_spec,
                          const std::vector<ParamVector>& target_critics,
                          std::span<const double> next_state, const EnsembleConfig& cfg,
                          RandomStream& noise);

// Median across actors of actor_target_value, fresh noise per actor.
double ensemble_target_value(const MlpSpec& actor_spec, const std::vector<ParamVector>& actors,
                             const MlpSpec& critic_spec,
                             const std::vector<ParamVector>& target_critics,
                             std::span<const double> next_state, const EnsembleConfig& cfg,
                             RandomStream& noise);

// y = r + gamma * v_next, with no bootstrap through termination.
double td_target(double reward, bool terminated, double next_value, const EnsembleConfig& cfg);

// q-quantile across the live critics of Q(s, pi(s)) with the noiseless action.
double ensemble_state_value(const MlpSpec& actor_spec, const ParamVector& actor,
                            const MlpSpec& critic_spec, const std::vector<ParamVector>& critics,
                            std::span<const double> state, double q);

}  // namespace mamc
