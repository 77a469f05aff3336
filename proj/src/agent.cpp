#include "mamc/agent.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "mamc/ensemble.hpp"

namespace mamc {

namespace {

constexpr double kTd3NoiseClip = 0.5;

// Substream ids for the named random streams.
enum StreamId : std::uint64_t {
  kInitStream = 1,
  kEnvStream = 2,
  kReplayStream = 3,
  kExploreStream = 4,
  kTargetStream = 5,
  kSelectStream = 6,
  kEvalStreamBase = 7000000000ULL,
};

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Minibatch packed into flat row-major arrays for the batched passes.
struct PackedBatch {
  int size = 0;
  std::vector<double> states;       // B x sdim
  std::vector<double> sa;           // B x (sdim + adim), stored actions
  std::vector<double> next_states;  // B x sdim
  std::vector<double> rewards;      // B
  std::vector<std::uint8_t> terminated;
};

PackedBatch pack(const std::vector<Transition>& batch, int sdim, int adim) {
  PackedBatch pb;
  pb.size = static_cast<int>(batch.size());
  const std::size_t b = batch.size();
  pb.states.resize(b * static_cast<std::size_t>(sdim));
  pb.sa.resize(b * static_cast<std::size_t>(sdim + adim));
  pb.next_states.resize(b * static_cast<std::size_t>(sdim));
  pb.rewards.resize(b);
  pb.terminated.resize(b);
  for (std::size_t row = 0; row < b; ++row) {
    const Transition& t = batch[row];
    std::copy(t.state.begin(), t.state.end(), pb.states.begin() + row * sdim);
    double* sa = pb.sa.data() + row * static_cast<std::size_t>(sdim + adim);
    std::copy(t.state.begin(), t.state.end(), sa);
    std::copy(t.action.begin(), t.action.end(), sa + sdim);
    std::copy(t.next_state.begin(), t.next_state.end(), pb.next_states.begin() + row * sdim);
    pb.rewards[row] = t.reward;
    pb.terminated[row] = t.terminated ? 1 : 0;
  }
  return pb;
}

// Scratch buffers for the batched target and score computations. Thread-local
// so concurrent seed-sweep runs stay independent.
struct Scratch {
  std::vector<double> acts, sa, qv, vi, col, out;
  Trace trace;
};
thread_local Scratch tls;

// Perturbed ensemble TD targets for one minibatch, recomputed from the
// current target critics and actors. Noise order: actor, then row, then dim.
void compute_mamc_targets(AgentState& s, const PackedBatch& pb, std::vector<double>& y) {
  const int B = pb.size;
  const int sdim = s.actor_spec.input_width();
  const int adim = s.actor_spec.output_width();
  const int na = static_cast<int>(s.actors.size());
  const int nc = static_cast<int>(s.critic_targets.size());
  const double sigma = s.cfg.target_noise_std;

  Scratch& ws = tls;
  ws.vi.resize(static_cast<std::size_t>(na) * static_cast<std::size_t>(B));
  ws.sa.resize(static_cast<std::size_t>(B) * static_cast<std::size_t>(sdim + adim));
  ws.qv.resize(static_cast<std::size_t>(nc) * static_cast<std::size_t>(B));

  for (int i = 0; i < na; ++i) {
    forward(s.actor_spec, s.actors[static_cast<std::size_t>(i)], pb.next_states, B, ws.acts,
            &ws.trace);
    for (int row = 0; row < B; ++row) {
      for (int d = 0; d < adim; ++d) {
        double a = ws.acts[static_cast<std::size_t>(row) * adim + d] + s.rng_target.normal(0.0, sigma);
        const double bound = s.actor_spec.bounds[static_cast<std::size_t>(d)];
        ws.acts[static_cast<std::size_t>(row) * adim + d] = clip(a, -bound, bound);
      }
    }
    for (int row = 0; row < B; ++row) {
      double* dst = ws.sa.data() + static_cast<std::size_t>(row) * (sdim + adim);
      const double* ns = pb.next_states.data() + static_cast<std::size_t>(row) * sdim;
      std::copy(ns, ns + sdim, dst);
      std::copy(ws.acts.begin() + static_cast<std::size_t>(row) * adim,
                ws.acts.begin() + static_cast<std::size_t>(row + 1) * adim, dst + sdim);
    }
    for (int j = 0; j < nc; ++j) {
      forward(s.critic_spec, s.critic_targets[static_cast<std::size_t>(j)], ws.sa, B, ws.out,
              &ws.trace);
      std::copy(ws.out.begin(), ws.out.end(),
                ws.qv.begin() + static_cast<std::size_t>(j) * static_cast<std::size_t>(B));
    }
    ws.col.resize(static_cast<std::size_t>(nc));
    for (int row = 0; row < B; ++row) {
      for (int j = 0; j < nc; ++j) {
        ws.col[static_cast<std::size_t>(j)] = ws.qv[static_cast<std::size_t>(j) * B + row];
      }
      ws.vi[static_cast<std::size_t>(i) * B + row] = quantile_inplace(ws.col, s.cfg.q);
    }
  }

  const EnsembleConfig ecfg{s.cfg.q, s.cfg.gamma, s.cfg.target_noise_std};
  y.resize(static_cast<std::size_t>(B));
  ws.col.resize(static_cast<std::size_t>(na));
  for (int row = 0; row < B; ++row) {
    for (int i = 0; i < na; ++i) {
      ws.col[static_cast<std::size_t>(i)] = ws.vi[static_cast<std::size_t>(i) * B + row];
    }
    const double v = quantile_inplace(ws.col, 0.5);
    y[static_cast<std::size_t>(row)] =
        td_target(pb.rewards[static_cast<std::size_t>(row)],
                  pb.terminated[static_cast<std::size_t>(row)] != 0, v, ecfg);
  }
}

// Clipped-noise min-target over the two target critics, from the actor target.
void compute_td3_targets(AgentState& s, const PackedBatch& pb, std::vector<double>& y) {
  const int B = pb.size;
  const int sdim = s.actor_spec.input_width();
  const int adim = s.actor_spec.output_width();
  const double sigma = s.cfg.target_noise_std;

  Scratch& ws = tls;
  forward(s.actor_spec, s.actor_target, pb.next_states, B, ws.acts, &ws.trace);
  for (int row = 0; row < B; ++row) {
    for (int d = 0; d < adim; ++d) {
      const double eps =
          clip(s.rng_target.normal(0.0, sigma), -kTd3NoiseClip, kTd3NoiseClip);
      const double bound = s.actor_spec.bounds[static_cast<std::size_t>(d)];
      double& a = ws.acts[static_cast<std::size_t>(row) * adim + d];
      a = clip(a + eps, -bound, bound);
    }
  }
  ws.sa.resize(static_cast<std::size_t>(B) * static_cast<std::size_t>(sdim + adim));
  for (int row = 0; row < B; ++row) {
    double* dst = ws.sa.data() + static_cast<std::size_t>(row) * (sdim + adim);
    const double* ns = pb.next_states.data() + static_cast<std::size_t>(row) * sdim;
    std::copy(ns, ns + sdim, dst);
    std::copy(ws.acts.begin() + static_cast<std::size_t>(row) * adim,
              ws.acts.begin() + static_cast<std::size_t>(row + 1) * adim, dst + sdim);
  }

  ws.qv.resize(2 * static_cast<std::size_t>(B));
  for (int j = 0; j < 2; ++j) {
    forward(s.critic_spec, s.critic_targets[static_cast<std::size_t>(j)], ws.sa, B, ws.out,
            &ws.trace);
    std::copy(ws.out.begin(), ws.out.end(), ws.qv.begin() + static_cast<std::size_t>(j) * B);
  }

  y.resize(static_cast<std::size_t>(B));
  for (int row = 0; row < B; ++row) {
    const double v = std::min(ws.qv[static_cast<std::size_t>(row)],
                              ws.qv[static_cast<std::size_t>(B) + row]);
    const double r = pb.rewards[static_cast<std::size_t>(row)];
    y[static_cast<std::size_t>(row)] =
        pb.terminated[static_cast<std::size_t>(row)] != 0 ? r : r + s.cfg.gamma * v;
  }
}

std::uint64_t eval_seed(const TrainConfig& cfg, long long step) {
  return mix64(cfg.master_seed + mix64(kEvalStreamBase + static_cast<std::uint64_t>(step)));
}

void emit_eval_row(AgentState& s, const MetricsSink& sink, long long step, const EvalStats& es) {
  if (!sink) return;
  MetricsRow row;
  row.step = step;
  row.eval_mean = es.mean;
  row.eval_std = es.stddev;
  if (s.best_valid) row.best_actor = s.best_actor;
  if (s.scores_valid) row.selected_set = s.selected;
  sink(row);
}

RunResult run_common(const TrainConfig& cfg, const MetricsSink& sink, bool log_walltime) {
  AgentState st = init_agent(cfg);
  std::unique_ptr<Env> env = make_env(cfg.env_name);

  const auto t0 = std::chrono::steady_clock::now();
  MetricsSink wrapped;
  if (sink) {
    wrapped = [&](const MetricsRow& row) {
      if (log_walltime) {
        MetricsRow r = row;
        r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        sink(r);
      } else {
        sink(row);
      }
    };
  }

  const bool td3 = cfg.algorithm == Algorithm::Td3Smr;
  RunResult res;
  res.actor_spec = st.actor_spec;

  PackedBatch pb;
  std::vector<double> y;
  for (long long step = 1; step <= cfg.total_env_steps; ++step) {
    if (step > cfg.warmup_steps && st.replay.size() > 0) {
      if (td3) {
        pb = pack(st.replay.sample(static_cast<std::size_t>(cfg.batch_size), st.rng_replay),
                  st.actor_spec.input_width(), st.actor_spec.output_width());
        for (int m = 0; m < cfg.smr_passes; ++m) {
          compute_td3_targets(st, pb, y);
          for (int j = 0; j < 2; ++j) {
            LossGrad lg = critic_loss_grad(st.critic_spec, st.critics[static_cast<std::size_t>(j)],
                                           pb.sa, pb.size, y);
            adam_step(st.critics[static_cast<std::size_t>(j)], lg.grad,
                      st.critic_opt[static_cast<std::size_t>(j)]);
          }
          st.update_count += 1;
          if (st.update_count % cfg.delayed_update == 0) {
            LossGrad ag = actor_objective_grad(st.actor_spec, st.actors[0], st.critic_spec,
                                               st.critics[0], pb.states, pb.size);
            for (double& g : ag.grad) g = -g;
            adam_step(st.actors[0], ag.grad, st.actor_opt[0]);
            soft_update(st.actor_target, st.actors[0], cfg.tau);
            soft_update(st.critic_targets[0], st.critics[0], cfg.tau);
            soft_update(st.critic_targets[1], st.critics[1], cfg.tau);
          }
        }
      } else {
        train_critics_once(st);
        if ((step - cfg.warmup_steps) % cfg.delayed_update == 0) train_actors_once(st);
      }
    }
    explore_step(st, *env, wrapped);
    if (!td3 && step > cfg.warmup_steps) update_best(st);
    if (step % cfg.eval_interval == 0) {
      std::unique_ptr<Env> eval_env = make_env(cfg.env_name);
      const EvalStats es =
          evaluate(st.actor_spec, st.actors[static_cast<std::size_t>(st.best_actor)], *eval_env,
                   cfg.eval_episodes, eval_seed(cfg, step));
      res.eval_means.push_back(es.mean);
      emit_eval_row(st, wrapped, step, es);
    }
  }

  // Nothing trained: fall back to the initial argmax over factor scores.
  if (!td3 && !st.best_valid && st.replay.size() > 0) {
    refresh_selection(st);
    update_best(st);
  }
  res.best_actor_index = st.best_actor;
  res.best_actor = st.actors[static_cast<std::size_t>(st.best_actor)];
  return res;
}

}  // namespace

void TrainConfig::validate() const {
  require(n_actors >= 1, "n_actors must be at least 1");
  require(n_critics >= 1, "n_critics must be at least 1");
  require(batch_size >= 1, "batch_size must be at least 1");
  require(smr_passes >= 1, "smr_passes must be at least 1");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(tau >= 0.0 && tau <= 1.0, "tau must lie in [0, 1]");
  require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
  require(actor_lr > 0.0, "actor_lr must be positive");
  require(critic_lr > 0.0, "critic_lr must be positive");
  require(exploration_noise_std >= 0.0, "exploration_noise_std must be non-negative");
  require(target_noise_std >= 0.0, "target_noise_std must be non-negative");
  require(warmup_steps >= 0, "warmup_steps must be non-negative");
  require(total_env_steps >= 0, "total_env_steps must be non-negative");
  require(total_env_steps >= warmup_steps, "total_env_steps must cover warmup_steps");
  require(eval_interval >= 1, "eval_interval must be at least 1");
  require(eval_episodes >= 1, "eval_episodes must be at least 1");
  require(select_every >= 1, "select_every must be at least 1");
  require(delayed_update >= 1, "delayed_update must be at least 1");
  require(!hidden_widths.empty(), "hidden_widths must not be empty");
  for (int w : hidden_widths) require(w >= 1, "hidden_widths entries must be positive");
  require(env_name == "pendulum" || env_name == "pointmass" || env_name == "mountaincar",
          "unknown env_name: " + env_name);
}

int explore_set_size(int n_actors) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_actors))));
  return std::max(1, n);
}

AgentState init_agent(const TrainConfig& cfg) {
  cfg.validate();
  AgentState st;
  st.cfg = cfg;

  const std::unique_ptr<Env> env = make_env(cfg.env_name);
  const EnvSpec& es = env->spec();
  for (int i = 0; i < es.act_dim; ++i) {
    require(es.action_low[static_cast<std::size_t>(i)] ==
                -es.action_high[static_cast<std::size_t>(i)],
            "agent requires symmetric action bounds");
  }

  st.actor_spec.widths.push_back(es.obs_dim);
  st.critic_spec.widths.push_back(es.obs_dim + es.act_dim);
  for (int w : cfg.hidden_widths) {
    st.actor_spec.widths.push_back(w);
    st.critic_spec.widths.push_back(w);
  }
  st.actor_spec.widths.push_back(es.act_dim);
  st.actor_spec.head = OutputHead::Bounded;
  st.actor_spec.bounds = es.action_high;
  st.critic_spec.widths.push_back(1);

  st.rng_init = substream(cfg.master_seed, kInitStream);
  st.rng_env = substream(cfg.master_seed, kEnvStream);
  st.rng_replay = substream(cfg.master_seed, kReplayStream);
  st.rng_explore = substream(cfg.master_seed, kExploreStream);
  st.rng_target = substream(cfg.master_seed, kTargetStream);
  st.rng_select = substream(cfg.master_seed, kSelectStream);

  const bool td3 = cfg.algorithm == Algorithm::Td3Smr;
  const int na = td3 ? 1 : cfg.n_actors;
  const int nc = td3 ? 2 : cfg.n_critics;

  // Draw order: actors first, then critics; targets start as copies.
  for (int i = 0; i < na; ++i) st.actors.push_back(init_params(st.actor_spec, st.rng_init));
  for (int j = 0; j < nc; ++j) st.critics.push_back(init_params(st.critic_spec, st.rng_init));
  st.critic_targets = st.critics;
  if (td3) st.actor_target = st.actors[0];

  st.actor_opt.resize(static_cast<std::size_t>(na));
  for (AdamState& a : st.actor_opt) a.lr = cfg.actor_lr;
  st.critic_opt.resize(static_cast<std::size_t>(nc));
  for (AdamState& c : st.critic_opt) c.lr = cfg.critic_lr;
  return st;
}

void train_critics_once(AgentState& st) {
  const TrainConfig& cfg = st.cfg;
  const int nc = static_cast<int>(st.critics.size());
  std::vector<PackedBatch> batches;
  batches.reserve(static_cast<std::size_t>(nc));
  for (int j = 0; j < nc; ++j) {
    batches.push_back(pack(st.replay.sample(static_cast<std::size_t>(cfg.batch_size),
                                            st.rng_replay),
                           st.actor_spec.input_width(), st.actor_spec.output_width()));
  }

  std::vector<double> y;
  for (int m = 0; m < cfg.smr_passes; ++m) {
    for (int j = 0; j < nc; ++j) {
      compute_mamc_targets(st, batches[static_cast<std::size_t>(j)], y);
      LossGrad lg = critic_loss_grad(st.critic_spec, st.critics[static_cast<std::size_t>(j)],
                                     batches[static_cast<std::size_t>(j)].sa,
                                     batches[static_cast<std::size_t>(j)].size, y);
      adam_step(st.critics[static_cast<std::size_t>(j)], lg.grad,
                st.critic_opt[static_cast<std::size_t>(j)]);
      st.update_count += 1;
    }
    for (int j = 0; j < nc; ++j) {
      soft_update(st.critic_targets[static_cast<std::size_t>(j)],
                  st.critics[static_cast<std::size_t>(j)], cfg.tau);
    }
  }
}

void train_actors_once(AgentState& st) {
  const TrainConfig& cfg = st.cfg;
  const int na = static_cast<int>(st.actors.size());
  const int nc = static_cast<int>(st.critics.size());
  std::vector<PackedBatch> batches;
  batches.reserve(static_cast<std::size_t>(na));
  for (int i = 0; i < na; ++i) {
    batches.push_back(pack(st.replay.sample(static_cast<std::size_t>(cfg.batch_size),
                                            st.rng_replay),
                           st.actor_spec.input_width(), st.actor_spec.output_width()));
  }

  for (int m = 0; m < cfg.smr_passes; ++m) {
    const ParamVector& guide = st.critics[static_cast<std::size_t>(st.critic_cursor - 1)];
    for (int i = 0; i < na; ++i) {
      LossGrad ag = actor_objective_grad(st.actor_spec, st.actors[static_cast<std::size_t>(i)],
                                         st.critic_spec, guide,
                                         batches[static_cast<std::size_t>(i)].states,
                                         batches[static_cast<std::size_t>(i)].size);
      for (double& g : ag.grad) g = -g;
      adam_step(st.actors[static_cast<std::size_t>(i)], ag.grad,
                st.actor_opt[static_cast<std::size_t>(i)]);
    }
    st.critic_cursor = (st.critic_cursor % nc) + 1;
  }
}

void refresh_selection(AgentState& st) {
  const TrainConfig& cfg = st.cfg;
  const int na = static_cast<int>(st.actors.size());
  const int nc = static_cast<int>(st.critics.size());
  const int sdim = st.actor_spec.input_width();
  const int adim = st.actor_spec.output_width();

  const std::vector<Transition> batch =
      st.replay.sample(static_cast<std::size_t>(cfg.batch_size), st.rng_replay);
  const int B = static_cast<int>(batch.size());
  std::vector<double> states(static_cast<std::size_t>(B) * static_cast<std::size_t>(sdim));
  for (int row = 0; row < B; ++row) {
    std::copy(batch[static_cast<std::size_t>(row)].state.begin(),
              batch[static_cast<std::size_t>(row)].state.end(),
              states.begin() + static_cast<std::size_t>(row) * sdim);
  }

  Scratch& ws = tls;
  st.scores.skill.assign(static_cast<std::size_t>(na), 0.0);
  st.scores.creativity.assign(static_cast<std::size_t>(na), 0.0);
  ws.qv.resize(static_cast<std::size_t>(nc) * static_cast<std::size_t>(B));
  ws.sa.resize(static_cast<std::size_t>(B) * static_cast<std::size_t>(sdim + adim));
  ws.col.resize(static_cast<std::size_t>(nc));

  for (int i = 0; i < na; ++i) {
    forward(st.actor_spec, st.actors[static_cast<std::size_t>(i)], states, B, ws.acts, &ws.trace);
    for (int row = 0; row < B; ++row) {
      double* dst = ws.sa.data() + static_cast<std::size_t>(row) * (sdim + adim);
      const double* s = states.data() + static_cast<std::size_t>(row) * sdim;
      std::copy(s, s + sdim, dst);
      std::copy(ws.acts.begin() + static_cast<std::size_t>(row) * adim,
                ws.acts.begin() + static_cast<std::size_t>(row + 1) * adim, dst + sdim);
    }
    for (int j = 0; j < nc; ++j) {
      forward(st.critic_spec, st.critics[static_cast<std::size_t>(j)], ws.sa, B, ws.out,
              &ws.trace);
      std::copy(ws.out.begin(), ws.out.end(), ws.qv.begin() + static_cast<std::size_t>(j) * B);
    }
    double skill_acc = 0.0, creat_acc = 0.0;
    for (int row = 0; row < B; ++row) {
      for (int j = 0; j < nc; ++j) {
        ws.col[static_cast<std::size_t>(j)] = ws.qv[static_cast<std::size_t>(j) * B + row];
      }
      const double qhat = quantile_inplace(ws.col, cfg.q);
      skill_acc += qhat;
      for (int j = 0; j < nc; ++j) {
        creat_acc += std::abs(ws.qv[static_cast<std::size_t>(j) * B + row] - qhat);
      }
    }
    st.scores.skill[static_cast<std::size_t>(i)] = skill_acc / static_cast<double>(B);
    st.scores.creativity[static_cast<std::size_t>(i)] =
        creat_acc / (static_cast<double>(B) * static_cast<double>(nc));
  }

  st.factor_batches += 1;
  st.scores.batch_id = st.factor_batches;
  st.scores_valid = true;
  st.selected = select_explore(st.scores, explore_set_size(na));
}

void update_best(AgentState& st) {
  if (!st.scores_valid) return;
  st.best_actor = select_exploit(st.scores);
  st.best_valid = true;
}

void explore_step(AgentState& st, Env& env, const MetricsSink& sink) {
  const TrainConfig& cfg = st.cfg;
  const EnvSpec& es = env.spec();
  if (st.obs.empty()) {
    st.obs = env.reset(st.rng_env.next_u64());
    st.episode_return = 0.0;
  }

  // An empty buffer counts as warmup: selection has nothing to score yet.
  const bool in_warmup = st.env_step < cfg.warmup_steps || st.replay.size() == 0;
  std::vector<double> action(static_cast<std::size_t>(es.act_dim));
  if (in_warmup) {
    for (int d = 0; d < es.act_dim; ++d) {
      action[static_cast<std::size_t>(d)] = st.rng_explore.uniform(
          es.action_low[static_cast<std::size_t>(d)], es.action_high[static_cast<std::size_t>(d)]);
    }
  } else {
    int actor_idx = 0;
    if (cfg.algorithm == Algorithm::Mamc) {
      const long long post = st.env_step - cfg.warmup_steps;
      if (!st.scores_valid || post % cfg.select_every == 0) refresh_selection(st);
      actor_idx = st.selected[st.rng_select.uniform_index(st.selected.size())];
    }
    action = forward_one(st.actor_spec, st.actors[static_cast<std::size_t>(actor_idx)], st.obs);
    for (int d = 0; d < es.act_dim; ++d) {
      action[static_cast<std::size_t>(d)] += st.rng_explore.normal(0.0, cfg.exploration_noise_std);
    }
  }

  const StepResult r = env.step(action);
  Transition t;
  t.state = st.obs;
  t.action = action;  // stored as emitted; the env applied the clipped value
  t.reward = r.reward;
  t.next_state = r.observation;
  t.terminated = r.terminated;
  st.replay.push(std::move(t));

  st.episode_return += r.reward;
  st.env_step += 1;
  st.obs = r.observation;

  if (r.terminated || r.truncated) {
    if (sink) {
      MetricsRow row;
      row.step = st.env_step;
      row.train_return = st.episode_return;
      if (st.best_valid) row.best_actor = st.best_actor;
      if (st.scores_valid) row.selected_set = st.selected;
      sink(row);
    }
    st.obs = env.reset(st.rng_env.next_u64());
    st.episode_return = 0.0;
  }
}

EvalStats evaluate(const MlpSpec& actor_spec, const ParamVector& actor, Env& env, int episodes,
                   std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
  std::vector<double> returns;
  returns.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    std::vector<double> obs = env.reset(mix64(seed + static_cast<std::uint64_t>(e)));
    double ep = 0.0;
    while (true) {
      const std::vector<double> action = forward_one(actor_spec, actor, obs);
      const StepResult r = env.step(action);
      ep += r.reward;
      obs = r.observation;
      if (r.terminated || r.truncated) break;
    }
    returns.push_back(ep);
  }
  EvalStats out;
  for (double x : returns) out.mean += x;
  out.mean /= static_cast<double>(returns.size());
  double ss = 0.0;
  for (double x : returns) ss += (x - out.mean) * (x - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(returns.size()));
  return out;
}

RunResult run(const TrainConfig& cfg, const MetricsSink& sink, bool log_walltime) {
  cfg.validate();
  require(cfg.algorithm == Algorithm::Mamc, "run() drives the multi-actor learner; use run_td3_smr for the baseline");
  return run_common(cfg, sink, log_walltime);
}

RunResult run_td3_smr(const TrainConfig& cfg, const MetricsSink& sink, bool log_walltime) {
  cfg.validate();
  TrainConfig c = cfg;
  c.algorithm = Algorithm::Td3Smr;
  return run_common(c, sink, log_walltime);
}

}  // namespace mamc
