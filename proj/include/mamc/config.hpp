#pragma once

#include <set>
#include <string>

#include "mamc/agent.hpp"

namespace mamc {

// TrainConfig plus the set of keys that were explicitly assigned, so flag
// overrides and the baseline profile can tell defaults from user choices.
struct ConfigOverlay {
  TrainConfig values;
  std::set<std::string> assigned;

  bool has(const std::string& key) const { return assigned.count(key) != 0; }
};

// Assigns one key from its text form. `context` prefixes error messages
// ("line 3" for files, "--q" for flags). Throws std::invalid_argument on an
// unknown key or an unparsable value.
void set_key(ConfigOverlay& overlay, const std::string& key, const std::string& raw,
             const std::string& context);

// Line-oriented `key = value` text; `#` starts a comment; blank lines are
// skipped. Unknown keys are hard errors naming the line.
ConfigOverlay parse_config_text(const std::string& text);
ConfigOverlay parse_config_file(const std::string& path);

// For algorithm = td3smr, fills the baseline's own column defaults into keys
// the user left untouched (actor_lr 3e-4, delayed_update 2, target noise
// 0.2), then validates.
void finalize_config(ConfigOverlay& overlay);

// Key list in canonical order with current values, for help text.
std::vector<std::pair<std::string, std::string>> config_entries(const TrainConfig& cfg);

}  // namespace mamc
