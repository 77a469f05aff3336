#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mamc/env.hpp"
#include "mamc/nn.hpp"
#include "mamc/replay.hpp"
#include "mamc/select.hpp"

namespace mamc {

enum class Algorithm { Mamc, Td3Smr };

struct TrainConfig {
  int n_actors = 10;
  int n_critics = 10;
  int batch_size = 256;
  int smr_passes = 10;  // data reuse factor M
  double gamma = 0.99;
  double tau = 5e-3;
  double q = 0.2;
  double actor_lr = 1e-4;
  double critic_lr = 3e-4;
  double exploration_noise_std = 0.1;
  double target_noise_std = 0.1;
  long long warmup_steps = 5000;
  long long total_env_steps = 30000;
  long long eval_interval = 1000;
  int eval_episodes = 10;
  int select_every = 1;   // steps between explorer re-selections
  int delayed_update = 1; // d: actor/target cadence in critic updates
  std::uint64_t master_seed = 0;
  std::string env_name = "pendulum";
  Algorithm algorithm = Algorithm::Mamc;
  std::vector<int> hidden_widths = {64, 64};

  void validate() const;  // throws std::invalid_argument naming the field
};

// One metrics event. Rows are emitted at episode ends and at evaluations;
// fields that do not apply to the event stay empty.
struct MetricsRow {
  long long step = 0;
  std::optional<double> train_return;
  std::optional<double> eval_mean;
  std::optional<double> eval_std;
  std::optional<int> best_actor;
  std::optional<std::vector<int>> selected_set;
  std::optional<long long> wall_ms;
};

using MetricsSink = std::function<void(const MetricsRow&)>;

struct AgentState {
  TrainConfig cfg;
  MlpSpec actor_spec, critic_spec;

  std::vector<ParamVector> actors;
  std::vector<AdamState> actor_opt;
  std::vector<ParamVector> critics, critic_targets;
  std::vector<AdamState> critic_opt;
  ParamVector actor_target;  // td3smr only

  ReplayBuffer replay{1000000};
  int critic_cursor = 1;  // o, 1-based in [1, n_critics]
  long long env_step = 0;

  FactorScores scores;
  bool scores_valid = false;
  std::vector<int> selected;
  int best_actor = 0;
  bool best_valid = false;

  // Named substreams; every random decision is attributed to exactly one.
  RandomStream rng_init{0}, rng_env{0}, rng_replay{0}, rng_explore{0}, rng_target{0},
      rng_select{0};

  std::vector<double> obs;  // current episode observation, empty before first reset
  double episode_return = 0.0;
  long long update_count = 0;  // critic updates, drives the delayed cadence
  std::uint64_t factor_batches = 0;
};

AgentState init_agent(const TrainConfig& cfg);

// Number of explorers: round(sqrt(n_actors)), at least 1.
int explore_set_size(int n_actors);

// One critics-learning stage: n_critics fresh minibatches; smr_passes sweeps
// of (recompute targets, one Adam step per critic, soft-update every target).
void train_critics_once(AgentState& state);

// One actors-learning stage: n_actors fresh minibatches; per sweep every
// actor ascends the objective under the cursor critic, then the cursor
// advances by one with wraparound.
void train_actors_once(AgentState& state);

// One environment interaction: pick an explorer from the non-dominated set
// (uniform actions during warmup), act with Gaussian noise, store the
// transition, and emit an episode row at episode end.
void explore_step(AgentState& state, Env& env, const MetricsSink& sink);

// best_actor <- argmax skill over the latest factor scores.
void update_best(AgentState& state);

// Refreshes factor scores and the explorer set from a fresh minibatch.
void refresh_selection(AgentState& state);

struct EvalStats {
  double mean = 0.0;
  double stddev = 0.0;  // population std over episodes
};

// Deterministic rollout of the noiseless policy over full episodes.
EvalStats evaluate(const MlpSpec& actor_spec, const ParamVector& actor, Env& env, int episodes,
                   std::uint64_t seed);

struct RunResult {
  MlpSpec actor_spec;
  ParamVector best_actor;
  int best_actor_index = 0;
  std::vector<double> eval_means;  // chronological
};

// Full training loop: warmup, then per environment step the three stages and
// the best-actor refresh, with periodic evaluations.
RunResult run(const TrainConfig& cfg, const MetricsSink& sink = nullptr,
              bool log_walltime = false);

// Baseline comparator: one actor with a target, two critics, min-target with
// clipped smoothing noise, delayed actor/target updates, same data reuse M.
RunResult run_td3_smr(const TrainConfig& cfg, const MetricsSink& sink = nullptr,
                      bool log_walltime = false);

}  // namespace mamc
