// Copyright 2026 The kwprune Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kwprune/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <functional>
#include <map>

namespace kwprune {

ConfigError::ConfigError(std::string source, std::string key, std::string why)
    : std::runtime_error(source + ": " + (key.empty() ? "" : key + ": ") + why),
      source_(std::move(source)),
      key_(std::move(key)) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string item = trim(s.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = comma + 1;
  }
  return out;
}

// Thrown by the value parsers; rewrapped with source and key.
struct BadValue {
  std::string why;
};

template <typename T>
T parse_number(std::string_view text) {
  std::string s = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw BadValue{"'" + s + "' is not a valid number"};
  }
  return value;
}

std::size_t parse_positive(std::string_view text) {
  auto v = parse_number<long long>(text);
  if (v <= 0) throw BadValue{"must be a positive integer"};
  return static_cast<std::size_t>(v);
}

std::size_t parse_count(std::string_view text) {
  auto v = parse_number<long long>(text);
  if (v < 0) throw BadValue{"must be non-negative"};
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text) {
  std::string s = trim(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw BadValue{"'" + s + "' is not a boolean"};
}

std::vector<PolicyKind> parse_policies(std::string_view text) {
  std::vector<PolicyKind> out;
  for (const auto& name : split_list(text)) {
    auto kind = parse_policy(name);
    if (!kind) throw BadValue{"unknown policy '" + name + "'"};
    out.push_back(*kind);
  }
  if (out.empty()) throw BadValue{"no policies given"};
  return out;
}

std::vector<std::size_t> parse_sweep(std::string_view text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) out.push_back(parse_positive(item));
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i] <= out[i - 1]) throw BadValue{"sweep values must be strictly increasing"};
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"data.log", [](RunConfig& c, std::string_view v) { c.log_path = trim(v); }},
      {"output.dir", [](RunConfig& c, std::string_view v) { c.out_dir = trim(v); }},

      {"simulation.n_min",
       [](RunConfig& c, std::string_view v) { c.simulation.n_min = parse_positive(v); }},
      {"simulation.window",
       [](RunConfig& c, std::string_view v) {
         c.simulation.window = static_cast<int>(parse_positive(v));
       }},
      {"simulation.decision_start",
       [](RunConfig& c, std::string_view v) {
         c.simulation.decision_start = static_cast<DayIndex>(parse_positive(v));
       }},
      {"simulation.decision_end",
       [](RunConfig& c, std::string_view v) {
         c.simulation.decision_end = static_cast<DayIndex>(parse_positive(v));
       }},
      {"simulation.policies",
       [](RunConfig& c, std::string_view v) { c.simulation.policies = parse_policies(v); }},
      {"simulation.response",
       [](RunConfig& c, std::string_view v) {
         auto r = BudgetModel::parse(trim(v));
         if (!r) throw BadValue{"expected identity, linear or concave"};
         c.simulation.budget_model.response = *r;
       }},
      {"simulation.alpha",
       [](RunConfig& c, std::string_view v) {
         double a = parse_number<double>(v);
         if (!(a > 0.0 && a <= 1.0)) throw BadValue{"alpha must be in (0, 1]"};
         c.simulation.budget_model.alpha = a;
       }},
      {"simulation.seed",
       [](RunConfig& c, std::string_view v) {
         c.simulation.seed = parse_number<std::uint64_t>(v);
         c.synthetic.seed = c.simulation.seed;
       }},
      {"simulation.compounding",
       [](RunConfig& c, std::string_view v) { c.simulation.compounding = parse_bool(v); }},
      {"simulation.jobs",
       [](RunConfig& c, std::string_view v) { c.simulation.jobs = parse_positive(v); }},

      {"policy.prune_to",
       [](RunConfig& c, std::string_view v) { c.simulation.prune_to = parse_count(v); }},

      {"memory.path", [](RunConfig& c, std::string_view v) { c.memory_path = trim(v); }},
      {"memory.k_shot",
       [](RunConfig& c, std::string_view v) { c.simulation.k_shot = parse_positive(v); }},
      {"memory.same_campaign_only",
       [](RunConfig& c, std::string_view v) {
         c.simulation.campaign_scoped_memory = parse_bool(v);
       }},
      {"memory.char_cap",
       [](RunConfig& c, std::string_view v) {
         c.simulation.overview_char_cap = parse_count(v);
       }},

      {"llm.backend",
       [](RunConfig& c, std::string_view v) {
         std::string s = trim(v);
         if (s != "scripted" && s != "live") throw BadValue{"expected scripted or live"};
         c.backend = s;
       }},
      {"llm.script", [](RunConfig& c, std::string_view v) { c.script_path = trim(v); }},
      {"llm.script_cycle",
       [](RunConfig& c, std::string_view v) { c.script_cycle = parse_bool(v); }},
      {"llm.endpoint", [](RunConfig& c, std::string_view v) { c.live.endpoint = trim(v); }},
      {"llm.path", [](RunConfig& c, std::string_view v) { c.live.path = trim(v); }},
      {"llm.model", [](RunConfig& c, std::string_view v) { c.live.model = trim(v); }},
      {"llm.timeout_secs",
       [](RunConfig& c, std::string_view v) {
         double t = parse_number<double>(v);
         if (!(t > 0)) throw BadValue{"timeout must be positive"};
         c.live.timeout_secs = t;
       }},
      {"llm.max_retries",
       [](RunConfig& c, std::string_view v) {
         c.live.max_retries = static_cast<int>(parse_count(v));
       }},
      {"llm.max_repairs",
       [](RunConfig& c, std::string_view v) {
         c.simulation.max_repairs = static_cast<int>(parse_count(v));
       }},

      {"compare.sweep", [](RunConfig& c, std::string_view v) { c.sweep = parse_sweep(v); }},

      {"synthetic.campaigns",
       [](RunConfig& c, std::string_view v) {
         c.synthetic.campaigns = static_cast<int>(parse_positive(v));
       }},
      {"synthetic.keywords_per_campaign",
       [](RunConfig& c, std::string_view v) {
         c.synthetic.keywords_per_campaign = static_cast<int>(parse_positive(v));
       }},
      {"synthetic.keyword_jitter",
       [](RunConfig& c, std::string_view v) {
         c.synthetic.keyword_jitter = static_cast<int>(parse_count(v));
       }},
      {"synthetic.days",
       [](RunConfig& c, std::string_view v) {
         c.synthetic.days = static_cast<int>(parse_positive(v));
       }},
      {"synthetic.skew_fraction",
       [](RunConfig& c, std::string_view v) {
         double f = parse_number<double>(v);
         if (!(f > 0.0 && f < 1.0)) throw BadValue{"skew_fraction must be in (0, 1)"};
         c.synthetic.skew_fraction = f;
       }},
      {"synthetic.skew_share",
       [](RunConfig& c, std::string_view v) {
         double f = parse_number<double>(v);
         if (!(f > 0.0 && f <= 1.0)) throw BadValue{"skew_share must be in (0, 1]"};
         c.synthetic.skew_share = f;
       }},
      {"synthetic.noise",
       [](RunConfig& c, std::string_view v) { c.synthetic.noise = parse_number<double>(v); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value,
                      std::string_view source) {
  for (const auto& [k, set] : setters()) {
    if (k != key) continue;
    try {
      set(config, value);
    } catch (const BadValue& e) {
      throw ConfigError(std::string(source), k, e.why);
    }
    return;
  }
  throw ConfigError(std::string(source), std::string(key), "unknown key");
}

void load_config_file(RunConfig& config, const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    std::string why = e.message();
    if (e.line() > 0) why += " (line " + std::to_string(e.line()) + ")";
    throw ConfigError(path, "", why);
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(path, section, "keys must live inside a [section]");
    }
    for (const auto& [name, leaf] : body) {
      set_config_value(config, section + "." + name, leaf.data(), path);
    }
  }
}

void validate_run_config(const RunConfig& config) {
  if (config.simulation.decision_end < config.simulation.decision_start) {
    throw ConfigError("config", "simulation.decision_end", "empty decision-day range");
  }
  if (config.simulation.decision_start < config.simulation.window) {
    throw ConfigError("config", "simulation.decision_start",
                      "must be at least the window length");
  }
  if (config.backend == "live" && config.live.endpoint.empty()) {
    throw ConfigError("config", "llm.endpoint", "required for the live backend");
  }
}

}  // namespace kwprune
