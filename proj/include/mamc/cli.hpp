#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mamc/config.hpp"
#include "mamc/theory.hpp"

namespace mamc {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;  // bad input or a failed assertable check
inline constexpr int kExitRuntime = 2;     // I/O or internal failure

// Shortest text form that parses back to the identical double.
std::string format_double(double x);

std::string metrics_csv_header();
std::string format_metrics_row(const MetricsRow& row);

// Flat text format: `widths w0 w1 ... wk` header, then one real per line.
void save_actor_params(const std::string& path, const MlpSpec& spec, const ParamVector& params);
struct LoadedActor {
  std::vector<int> widths;
  ParamVector params;
};
LoadedActor load_actor_params(const std::string& path);

// "a..b" inclusive, a <= b.
std::pair<long long, long long> parse_seed_range(const std::string& text);

struct TrainCommand {
  ConfigOverlay overlay;
  std::string out_dir = ".";
  bool log_walltime = false;
  std::optional<std::pair<long long, long long>> seed_range;  // per-seed subdirectories
  int jobs = 1;
};
int cmd_train(const TrainCommand& cmd, std::ostream& out);

struct EvalCommand {
  std::string params_path;
  std::string env_name;
  int episodes = 10;
  std::uint64_t seed = 0;
};
int cmd_eval(const EvalCommand& cmd, std::ostream& out);

struct TheoryCommand {
  int n_actors = 10;
  int n_critics = 10;
  std::vector<double> qs = {0.0, 0.2, 0.5, 1.0};
  long long replications = 20000;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};
int cmd_theory_check(const TheoryCommand& cmd, std::ostream& out);

struct AggregateCommand {
  std::vector<std::string> inputs;  // metrics.csv paths
  std::string out_path = "aggregate.csv";
};
int cmd_aggregate(const AggregateCommand& cmd, std::ostream& out);

}  // namespace mamc
