#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mamc/ensemble.hpp"
#include "mamc/nn.hpp"
#include "mamc/replay.hpp"

namespace mamc {

// Per-actor selection factors over one evaluation mini-batch. Both are
// maximized: skill is the ensemble value of the actor's own actions,
// creativity is the mean spread of critic opinions around that value.
struct FactorScores {
  std::vector<double> skill;
  std::vector<double> creativity;
  std::uint64_t batch_id = 0;
};

// Mean over batch states of ensemble_state_value (live critics, noiseless
// actions).
double skill(const MlpSpec& actor_spec, const ParamVector& actor, const MlpSpec& critic_spec,
             const std::vector<ParamVector>& critics, const std::vector<Transition>& batch,
             double q);

// Mean over batch states and critics of |Q_j(s, pi(s)) - qhat(s)| where qhat
// is the q-quantile across critics at that state.
double creativity(const MlpSpec& actor_spec, const ParamVector& actor, const MlpSpec& critic_spec,
                  const std::vector<ParamVector>& critics, const std::vector<Transition>& batch,
                  double q);

// Non-dominated sorting under maximization of both coordinates. front[i] is
// the 0-based front index of point i; fronts lists point indices per front in
// ascending order.
struct ParetoFronts {
  std::vector<int> front;
  std::vector<std::vector<int>> fronts;
};
ParetoFronts nondominated_sort(const std::vector<std::array<double, 2>>& points);

// Crowding distance for the points of one front (indices into points).
// Boundary points per objective get +infinity; interior points accumulate
// (next - prev) / (max - min) per objective; zero-range objectives contribute
// nothing. Fronts of one or two points are all +infinity.
std::vector<double> crowding_distance(const std::vector<std::array<double, 2>>& points,
                                      const std::vector<int>& front);

// Top n_select actor indices by (front ascending, crowding descending, index
// ascending), returned in ascending index order.
std::vector<int> select_explore(const FactorScores& scores, int n_select);

// Index of the maximal skill, ties to the lowest index.
int select_exploit(const FactorScores& scores);

}  // namespace mamc
