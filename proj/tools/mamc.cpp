#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mamc/cli.hpp"
#include "mamc/config.hpp"

namespace {

struct FlagSpec {
  std::string key;
  std::string help;
  std::vector<std::string> aliases;
};

// Every TrainConfig key is exposed as a string flag and funneled through the
// config parser, so files and flags share one validation path.
const std::vector<FlagSpec>& train_flags() {
  static const std::vector<FlagSpec> specs = {
      {"n_actors", "actor ensemble size", {}},
      {"n_critics", "critic ensemble size", {}},
      {"batch_size", "minibatch size", {}},
      {"smr_passes", "data reuse passes per environment step", {}},
      {"gamma", "discount factor", {}},
      {"tau", "soft target update rate", {}},
      {"q", "critic aggregation quantile", {}},
      {"actor_lr", "actor learning rate", {}},
      {"critic_lr", "critic learning rate", {}},
      {"exploration_noise_std", "behaviour policy noise", {}},
      {"target_noise_std", "target policy smoothing noise", {}},
      {"warmup_steps", "uniform-action steps before learning", {"--warmup"}},
      {"total_env_steps", "environment steps to run", {"--steps"}},
      {"eval_interval", "steps between evaluations", {}},
      {"eval_episodes", "episodes per evaluation", {}},
      {"select_every", "steps between explorer re-selections", {}},
      {"delayed_update", "critic updates per actor/target update", {}},
      {"master_seed", "seed for all random streams", {"--seed"}},
      {"env_name", "pendulum | pointmass | mountaincar", {"--env"}},
      {"algorithm", "mamc | td3smr", {"--algo"}},
      {"hidden_widths", "comma-separated hidden layer widths", {}},
  };
  return specs;
}

std::string default_for(const std::string& key) {
  static const mamc::TrainConfig defaults;
  for (const auto& [k, v] : mamc::config_entries(defaults)) {
    if (k == key) return v;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-actor multi-critic training laboratory"};
  app.require_subcommand(1);

  // train
  CLI::App* train = app.add_subcommand("train", "train an agent and write metrics.csv");
  std::string config_path, train_out = ".", seeds_text;
  bool log_walltime = false;
  int jobs = 1;
  train->add_option("--config", config_path, "config file with key = value lines");
  train->add_option("--out", train_out, "output directory")->capture_default_str();
  train->add_option("--seeds", seeds_text,
                    "inclusive seed range a..b; runs one sweep member per seed under "
                    "<out>/seed_<k>/ (overrides --master_seed)");
  train->add_option("--jobs", jobs, "concurrent sweep members")->capture_default_str();
  train->add_flag("--log-walltime", log_walltime,
                  "fill the wall_ms column (off keeps runs byte-reproducible)");
  std::vector<std::string> flag_values(train_flags().size());
  std::vector<CLI::Option*> flag_opts(train_flags().size());
  for (std::size_t i = 0; i < train_flags().size(); ++i) {
    const FlagSpec& fs = train_flags()[i];
    std::string names = "--" + fs.key;
    for (const std::string& alias : fs.aliases) names += "," + alias;
    flag_opts[i] =
        train->add_option(names, flag_values[i], fs.help)->default_str(default_for(fs.key));
  }

  // eval
  CLI::App* eval = app.add_subcommand("eval", "evaluate a saved actor");
  mamc::EvalCommand eval_cmd;
  eval->add_option("--params", eval_cmd.params_path, "actor parameter file")->required();
  eval->add_option("--env", eval_cmd.env_name, "pendulum | pointmass | mountaincar")->required();
  eval->add_option("--episodes", eval_cmd.episodes, "episodes to average")->capture_default_str();
  eval->add_option("--seed", eval_cmd.seed, "evaluation seed")->capture_default_str();

  // theory-check
  CLI::App* theory = app.add_subcommand(
      "theory-check", "verify the ensemble sandwich and variance properties");
  mamc::TheoryCommand theory_cmd;
  theory->add_option("--n_actors", theory_cmd.n_actors, "synthetic actor count")
      ->capture_default_str();
  theory->add_option("--n_critics", theory_cmd.n_critics, "synthetic critic count")
      ->capture_default_str();
  theory->add_option("--q", theory_cmd.qs, "quantiles to check")->capture_default_str();
  theory->add_option("--replications", theory_cmd.replications, "Monte-Carlo replications (>= 1000)")
      ->capture_default_str();
  theory->add_option("--seed", theory_cmd.seed, "generator seed")->capture_default_str();
  theory->add_option("--out", theory_cmd.out_dir, "directory for theory_report.txt and theory.csv")
      ->capture_default_str();

  // aggregate
  CLI::App* agg = app.add_subcommand("aggregate", "mean/std of eval curves across runs");
  mamc::AggregateCommand agg_cmd;
  agg->add_option("inputs", agg_cmd.inputs, "metrics.csv files")->required();
  agg->add_option("--out", agg_cmd.out_path, "output CSV path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      mamc::TrainCommand cmd;
      if (!config_path.empty()) cmd.overlay = mamc::parse_config_file(config_path);
      for (std::size_t i = 0; i < train_flags().size(); ++i) {
        if (flag_opts[i]->count() > 0) {
          const std::string& key = train_flags()[i].key;
          mamc::set_key(cmd.overlay, key, flag_values[i], "--" + key);
        }
      }
      cmd.out_dir = train_out;
      cmd.log_walltime = log_walltime;
      cmd.jobs = jobs;
      if (!seeds_text.empty()) cmd.seed_range = mamc::parse_seed_range(seeds_text);
      return mamc::cmd_train(cmd, std::cout);
    }
    if (eval->parsed()) return mamc::cmd_eval(eval_cmd, std::cout);
    if (theory->parsed()) return mamc::cmd_theory_check(theory_cmd, std::cout);
    if (agg->parsed()) return mamc::cmd_aggregate(agg_cmd, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mamc::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mamc::kExitRuntime;
  }
  return mamc::kExitValidation;
}
