#include "mamc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mamc {

namespace {

namespace fs = std::filesystem;

constexpr double kSandwichSlack = 1e-12;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string metrics_csv_header() {
  return "step,train_return,eval_mean,eval_std,best_actor,selected_set,wall_ms";
}

std::string format_metrics_row(const MetricsRow& row) {
  std::string s = std::to_string(row.step);
  s += ',';
  if (row.train_return) s += format_double(*row.train_return);
  s += ',';
  if (row.eval_mean) s += format_double(*row.eval_mean);
  s += ',';
  if (row.eval_std) s += format_double(*row.eval_std);
  s += ',';
  if (row.best_actor) s += std::to_string(*row.best_actor);
  s += ',';
  if (row.selected_set) {
    const std::vector<int>& sel = *row.selected_set;
    for (std::size_t i = 0; i < sel.size(); ++i) {
      if (i) s += '|';
      s += std::to_string(sel[i]);
    }
  }
  s += ',';
  if (row.wall_ms) s += std::to_string(*row.wall_ms);
  return s;
}

void save_actor_params(const std::string& path, const MlpSpec& spec, const ParamVector& params) {
  std::ofstream f = open_out(path);
  f << "widths";
  for (int w : spec.widths) f << ' ' << w;
  f << '\n';
  for (double p : params) f << format_double(p) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

LoadedActor load_actor_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open parameter file: " + path);
  std::string header;
  if (!std::getline(f, header)) throw std::invalid_argument("empty parameter file: " + path);
  std::istringstream hs(header);
  std::string tag;
  hs >> tag;
  if (tag != "widths") {
    throw std::invalid_argument("parameter file must start with a 'widths' header: " + path);
  }
  LoadedActor actor;
  int w = 0;
  while (hs >> w) actor.widths.push_back(w);
  if (actor.widths.size() < 2) {
    throw std::invalid_argument("widths header needs at least input and output: " + path);
  }
  std::string line;
  int line_no = 1;
  while (std::getline(f, line)) {
    line_no += 1;
    if (line.empty()) continue;
    double x = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": unparsable parameter: " + line);
    }
    actor.params.push_back(x);
  }
  std::size_t expected = 0;
  for (std::size_t l = 0; l + 1 < actor.widths.size(); ++l) {
    expected += (static_cast<std::size_t>(actor.widths[l]) + 1) *
                static_cast<std::size_t>(actor.widths[l + 1]);
  }
  if (actor.params.size() != expected) {
    throw std::invalid_argument(path + ": expected " + std::to_string(expected) +
                                " parameters for the declared widths, found " +
                                std::to_string(actor.params.size()));
  }
  return actor;
}

std::pair<long long, long long> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    throw std::invalid_argument("seed range must be 'a..b', got: " + text);
  }
  const auto parse_one = [&text](const std::string& part) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw std::invalid_argument("seed range must be 'a..b', got: " + text);
    }
    return v;
  };
  const long long lo = parse_one(text.substr(0, dots));
  const long long hi = parse_one(text.substr(dots + 2));
  if (lo > hi) throw std::invalid_argument("seed range must have a <= b, got: " + text);
  return {lo, hi};
}

namespace {

// One full training run writing metrics.csv and actor.params under dir.
void train_one(const TrainConfig& cfg, const std::string& dir, bool log_walltime,
               std::ostream& out, std::mutex& out_mu) {
  ensure_dir(dir);
  const std::string csv_path = join_path(dir, "metrics.csv");
  std::ofstream csv = open_out(csv_path);
  csv << metrics_csv_header() << '\n';
  const MetricsSink sink = [&csv](const MetricsRow& row) {
    csv << format_metrics_row(row) << '\n';
  };

  const RunResult res = cfg.algorithm == Algorithm::Td3Smr ? run_td3_smr(cfg, sink, log_walltime)
                                                           : run(cfg, sink, log_walltime);
  csv.close();
  if (!csv) throw std::runtime_error("write failed: " + csv_path);
  save_actor_params(join_path(dir, "actor.params"), res.actor_spec, res.best_actor);

  std::string final_eval = "NA";
  if (!res.eval_means.empty()) final_eval = format_double(res.eval_means.back());
  std::lock_guard<std::mutex> lock(out_mu);
  out << "train: seed=" << cfg.master_seed << " env=" << cfg.env_name
      << " algorithm=" << (cfg.algorithm == Algorithm::Td3Smr ? "td3smr" : "mamc")
      << " best_actor=" << res.best_actor_index << " final_eval=" << final_eval << " out=" << dir
      << '\n';
}

}  // namespace

int cmd_train(const TrainCommand& cmd, std::ostream& out) {
  ConfigOverlay overlay = cmd.overlay;
  finalize_config(overlay);
  std::mutex out_mu;

  if (!cmd.seed_range) {
    train_one(overlay.values, cmd.out_dir, cmd.log_walltime, out, out_mu);
    return kExitOk;
  }

  const auto [lo, hi] = *cmd.seed_range;
  const long long count = hi - lo + 1;
  const int jobs = static_cast<int>(std::max<long long>(1, std::min<long long>(cmd.jobs, count)));

  std::atomic<long long> next{lo};
  std::exception_ptr first_error;
  std::mutex err_mu;
  const auto worker = [&]() {
    while (true) {
      const long long k = next.fetch_add(1);
      if (k > hi) return;
      try {
        TrainConfig cfg = overlay.values;
        cfg.master_seed = static_cast<std::uint64_t>(k);
        train_one(cfg, join_path(cmd.out_dir, "seed_" + std::to_string(k)), cmd.log_walltime, out,
                  out_mu);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return kExitOk;
}

int cmd_eval(const EvalCommand& cmd, std::ostream& out) {
  const LoadedActor actor = load_actor_params(cmd.params_path);
  std::unique_ptr<Env> env = make_env(cmd.env_name);
  const EnvSpec& es = env->spec();

  MlpSpec spec;
  spec.widths = actor.widths;
  spec.head = OutputHead::Bounded;
  spec.bounds = es.action_high;
  if (spec.input_width() != es.obs_dim || spec.output_width() != es.act_dim) {
    throw std::invalid_argument("parameter widths do not fit env '" + cmd.env_name + "'");
  }
  spec.validate();
  if (actor.params.size() != spec.param_count()) {
    throw std::invalid_argument("parameter count mismatch: file has " +
                                std::to_string(actor.params.size()) + ", widths need " +
                                std::to_string(spec.param_count()));
  }
  if (cmd.episodes < 1) throw std::invalid_argument("episodes must be at least 1");

  const EvalStats st = evaluate(spec, actor.params, *env, cmd.episodes, cmd.seed);
  out << format_double(st.mean) << " ± " << format_double(st.stddev) << '\n';
  return kExitOk;
}

namespace {

struct Generator {
  std::string label;
  DistSpec dist;
  bool asserted;  // symmetric i.i.d. generators are asserted, the rest reported
};

std::string bool_cell(bool b) { return b ? "1" : "0"; }

}  // namespace

int cmd_theory_check(const TheoryCommand& cmd, std::ostream& out) {
  if (cmd.replications < 1000) {
    throw std::invalid_argument("replications must be at least 1000");
  }
  if (cmd.n_actors < 1 || cmd.n_critics < 1) {
    throw std::invalid_argument("n_actors and n_critics must be at least 1");
  }
  for (double q : cmd.qs) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("q must lie in [0, 1]");
  }

  const std::vector<Generator> generators = {
      {"normal", {DistKind::Normal, 0.0, 1.0, 0.0}, true},
      {"normal", {DistKind::Normal, 5.0, 1.0, 0.0}, true},
      {"uniform", {DistKind::Uniform, 5.0, 1.0, 0.0}, true},
      {"lognormal", {DistKind::LogNormal, 0.0, 0.5, 0.0}, false},
      {"normal", {DistKind::Normal, 5.0, 1.0, 0.5}, false},
  };

  ensure_dir(cmd.out_dir);
  std::ofstream report = open_out(join_path(cmd.out_dir, "theory_report.txt"));
  std::ofstream csv = open_out(join_path(cmd.out_dir, "theory.csv"));
  csv << "q,dist,mean,stddev,rho,n_actors,n_critics,replications,"
         "lemma1_violation,lemma2_violation,sandwich_violation,"
         "var_single_critic,var_quantile_critics,var_single_actor,var_median_actors,"
         "c_q,epsilon_a,epsilon_c,actor_pass,critic_pass,asserted,pass\n";

  report << "ensemble sandwich and variance checks\n";
  report << "n_actors=" << cmd.n_actors << " n_critics=" << cmd.n_critics
         << " replications=" << cmd.replications << " seed=" << cmd.seed << "\n\n";

  const long long lemma_sweep = std::min<long long>(cmd.replications, 10000);
  const long long sandwich_batch = std::min<long long>(cmd.replications, 1000);

  int asserted_total = 0;
  int asserted_failures = 0;
  std::uint64_t stream_id = 1;
  for (double q : cmd.qs) {
    for (const Generator& gen : generators) {
      RandomStream rng = substream(cmd.seed, stream_id++);

      double lemma1_max = -std::numeric_limits<double>::infinity();
      double lemma2_max = -std::numeric_limits<double>::infinity();
      for (long long r = 0; r < lemma_sweep; ++r) {
        const SyntheticEnsemble m = draw_ensemble(cmd.n_actors, cmd.n_critics, gen.dist, rng);
        lemma1_max = std::max(lemma1_max, lemma1_violation(m, q));
        lemma2_max = std::max(lemma2_max, lemma2_violation(m, q));
      }

      std::vector<SyntheticEnsemble> batch;
      std::vector<double> refs;
      batch.reserve(static_cast<std::size_t>(sandwich_batch));
      for (long long b = 0; b < sandwich_batch; ++b) {
        batch.push_back(draw_ensemble(cmd.n_actors, cmd.n_critics, gen.dist, rng));
        refs.push_back(rng.normal());
      }
      const ErrorReport er = check_theorem_3_4(batch, q, refs);

      const VarianceReport vr =
          mc_variance_check(gen.dist, cmd.n_actors, cmd.n_critics, q, cmd.replications, rng);

      const bool sandwich_ok = lemma1_max <= kSandwichSlack && lemma2_max <= kSandwichSlack &&
                               er.max_violation <= kSandwichSlack;
      const bool pass = sandwich_ok && vr.actor_pass && vr.critic_pass;
      if (gen.asserted) {
        asserted_total += 1;
        if (!pass) asserted_failures += 1;
      }

      report << "q=" << format_double(q) << " dist=" << gen.label
             << "(mean=" << format_double(gen.dist.mean)
             << ",std=" << format_double(gen.dist.stddev) << ",rho=" << format_double(gen.dist.rho)
             << ")" << (gen.asserted ? " [asserted]" : " [diagnostic]") << '\n';
      report << "  lemma1 max violation   = " << format_double(lemma1_max) << '\n';
      report << "  lemma2 max violation   = " << format_double(lemma2_max) << '\n';
      report << "  sandwich max violation = " << format_double(er.max_violation) << '\n';
      report << "  var single critic      = " << format_double(vr.var_single_critic) << '\n';
      report << "  var critic quantile    = " << format_double(vr.var_quantile_critics) << '\n';
      report << "  var actor median       = " << format_double(vr.var_median_actors) << '\n';
      report << "  c_q                    = "
             << (vr.c_q_defined ? format_double(vr.c_q_estimate) : std::string("undefined"))
             << '\n';
      report << "  epsilon_a=" << format_double(vr.epsilon_a)
             << " epsilon_c=" << (vr.c_q_defined ? format_double(vr.epsilon_c) : "undefined")
             << '\n';
      report << "  " << (pass ? "PASS" : (gen.asserted ? "FAIL" : "reported only")) << "\n\n";

      csv << format_double(q) << ',' << gen.label << ',' << format_double(gen.dist.mean) << ','
          << format_double(gen.dist.stddev) << ',' << format_double(gen.dist.rho) << ','
          << cmd.n_actors << ',' << cmd.n_critics << ',' << cmd.replications << ','
          << format_double(lemma1_max) << ',' << format_double(lemma2_max) << ','
          << format_double(er.max_violation) << ',' << format_double(vr.var_single_critic) << ','
          << format_double(vr.var_quantile_critics) << ',' << format_double(vr.var_single_actor)
          << ',' << format_double(vr.var_median_actors) << ',' << format_double(vr.c_q_estimate)
          << ',' << format_double(vr.epsilon_a) << ',' << format_double(vr.epsilon_c) << ','
          << bool_cell(vr.actor_pass) << ',' << bool_cell(vr.critic_pass) << ','
          << bool_cell(gen.asserted) << ',' << bool_cell(pass) << '\n';
    }
  }

  report << "summary: " << asserted_total << " asserted checks, " << asserted_failures
         << " failures\n";
  out << "theory-check: " << asserted_total << " asserted checks, " << asserted_failures
      << " failures; report in " << cmd.out_dir << '\n';
  return asserted_failures == 0 ? kExitOk : kExitValidation;
}

int cmd_aggregate(const AggregateCommand& cmd, std::ostream& out) {
  if (cmd.inputs.empty()) throw std::invalid_argument("aggregate needs at least one metrics.csv");

  std::map<long long, std::vector<double>> by_step;
  for (const std::string& path : cmd.inputs) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open metrics file: " + path);
    std::string line;
    if (!std::getline(f, line) || line != metrics_csv_header()) {
      throw std::invalid_argument("unexpected metrics header in " + path);
    }
    int line_no = 1;
    while (std::getline(f, line)) {
      line_no += 1;
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::size_t start = 0;
      while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
          cells.push_back(line.substr(start));
          break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
      }
      if (cells.size() != 7) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": malformed row");
      }
      if (cells[2].empty()) continue;  // not an eval row
      long long step = 0;
      const auto [sp, sec] = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), step);
      double mean = 0.0;
      const auto [mp, mec] = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), mean);
      if (sec != std::errc{} || mec != std::errc{}) {
        throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": malformed row");
      }
      by_step[step].push_back(mean);
    }
  }

  std::ofstream f = open_out(cmd.out_path);
  f << "step,n,eval_mean_avg,eval_mean_std\n";
  for (const auto& [step, values] : by_step) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double stddev = std::sqrt(ss / static_cast<double>(values.size()));
    f << step << ',' << values.size() << ',' << format_double(mean) << ','
      << format_double(stddev) << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + cmd.out_path);
  out << "aggregate: " << by_step.size() << " steps from " << cmd.inputs.size() << " runs -> "
      << cmd.out_path << '\n';
  return kExitOk;
}

}  // namespace mamc
