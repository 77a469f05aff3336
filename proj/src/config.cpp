#include "mamc/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mamc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw std::invalid_argument("config " + context + ": " + what);
}

template <typename T>
T parse_int(const std::string& raw, const std::string& key, const std::string& context) {
  T value{};
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    fail(context, "unparsable integer for '" + key + "': " + raw);
  }
  return value;
}

double parse_real(const std::string& raw, const std::string& key, const std::string& context) {
  double value{};
  const char* first = raw.data();
  const char* last = raw.data() + raw.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    fail(context, "unparsable real for '" + key + "': " + raw);
  }
  return value;
}

std::vector<int> parse_widths(std::string raw, const std::string& context) {
  for (char& c : raw) {
    if (c == ',') c = ' ';
  }
  std::istringstream is(raw);
  std::vector<int> widths;
  std::string tok;
  while (is >> tok) widths.push_back(parse_int<int>(tok, "hidden_widths", context));
  if (widths.empty()) fail(context, "hidden_widths needs at least one width");
  return widths;
}

}  // namespace

void set_key(ConfigOverlay& overlay, const std::string& key, const std::string& raw,
             const std::string& context) {
  TrainConfig& c = overlay.values;
  const std::string v = trim(raw);
  if (v.empty()) fail(context, "missing value for '" + key + "'");

  if (key == "n_actors") c.n_actors = parse_int<int>(v, key, context);
  else if (key == "n_critics") c.n_critics = parse_int<int>(v, key, context);
  else if (key == "batch_size") c.batch_size = parse_int<int>(v, key, context);
  else if (key == "smr_passes") c.smr_passes = parse_int<int>(v, key, context);
  else if (key == "gamma") c.gamma = parse_real(v, key, context);
  else if (key == "tau") c.tau = parse_real(v, key, context);
  else if (key == "q") c.q = parse_real(v, key, context);
  else if (key == "actor_lr") c.actor_lr = parse_real(v, key, context);
  else if (key == "critic_lr") c.critic_lr = parse_real(v, key, context);
  else if (key == "exploration_noise_std") c.exploration_noise_std = parse_real(v, key, context);
  else if (key == "target_noise_std") c.target_noise_std = parse_real(v, key, context);
  else if (key == "warmup_steps") c.warmup_steps = parse_int<long long>(v, key, context);
  else if (key == "total_env_steps") c.total_env_steps = parse_int<long long>(v, key, context);
  else if (key == "eval_interval") c.eval_interval = parse_int<long long>(v, key, context);
  else if (key == "eval_episodes") c.eval_episodes = parse_int<int>(v, key, context);
  else if (key == "select_every") c.select_every = parse_int<int>(v, key, context);
  else if (key == "delayed_update") c.delayed_update = parse_int<int>(v, key, context);
  else if (key == "master_seed") {
    // Negative seeds are accepted as their two's-complement bit pattern.
    if (!v.empty() && v[0] == '-') {
      c.master_seed = static_cast<std::uint64_t>(parse_int<long long>(v, key, context));
    } else {
      c.master_seed = parse_int<std::uint64_t>(v, key, context);
    }
  } else if (key == "env_name") {
    c.env_name = v;
  } else if (key == "algorithm") {
    if (v == "mamc") c.algorithm = Algorithm::Mamc;
    else if (v == "td3smr") c.algorithm = Algorithm::Td3Smr;
    else fail(context, "algorithm must be 'mamc' or 'td3smr', got: " + v);
  } else if (key == "hidden_widths") {
    c.hidden_widths = parse_widths(v, context);
  } else {
    fail(context, "unknown key '" + key + "'");
  }
  overlay.assigned.insert(key);
}

ConfigOverlay parse_config_text(const std::string& text) {
  ConfigOverlay overlay;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    line_no += 1;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string context = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(context, "expected 'key = value', got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(context, "empty key");
    set_key(overlay, key, value, context);
  }
  return overlay;
}

ConfigOverlay parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void finalize_config(ConfigOverlay& overlay) {
  if (overlay.values.algorithm == Algorithm::Td3Smr) {
    if (!overlay.has("actor_lr")) overlay.values.actor_lr = 3e-4;
    if (!overlay.has("delayed_update")) overlay.values.delayed_update = 2;
    if (!overlay.has("target_noise_std")) overlay.values.target_noise_std = 0.2;
  }
  overlay.values.validate();
}

std::vector<std::pair<std::string, std::string>> config_entries(const TrainConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto add = [&out](const std::string& k, const std::string& v) { out.emplace_back(k, v); };
  add("n_actors", std::to_string(cfg.n_actors));
  add("n_critics", std::to_string(cfg.n_critics));
  add("batch_size", std::to_string(cfg.batch_size));
  add("smr_passes", std::to_string(cfg.smr_passes));
  std::ostringstream reals;
  const auto real = [&reals](double x) {
    reals.str("");
    reals << x;
    return reals.str();
  };
  add("gamma", real(cfg.gamma));
  add("tau", real(cfg.tau));
  add("q", real(cfg.q));
  add("actor_lr", real(cfg.actor_lr));
  add("critic_lr", real(cfg.critic_lr));
  add("exploration_noise_std", real(cfg.exploration_noise_std));
  add("target_noise_std", real(cfg.target_noise_std));
  add("warmup_steps", std::to_string(cfg.warmup_steps));
  add("total_env_steps", std::to_string(cfg.total_env_steps));
  add("eval_interval", std::to_string(cfg.eval_interval));
  add("eval_episodes", std::to_string(cfg.eval_episodes));
  add("select_every", std::to_string(cfg.select_every));
  add("delayed_update", std::to_string(cfg.delayed_update));
  add("master_seed", std::to_string(cfg.master_seed));
  add("env_name", cfg.env_name);
  add("algorithm", cfg.algorithm == Algorithm::Mamc ? "mamc" : "td3smr");
  std::string widths;
  for (std::size_t i = 0; i < cfg.hidden_widths.size(); ++i) {
    if (i) widths += ",";
    widths += std::to_string(cfg.hidden_widths[i]);
  }
  add("hidden_widths", widths);
  return out;
}

}  // namespace mamc
