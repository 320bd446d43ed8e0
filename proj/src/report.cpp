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

#include "kwprune/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>
#include <json.hpp>

#include "kwprune/csv.hpp"

namespace kwprune {

std::vector<SummaryRow> summarize(const SimulationTrace& trace) {
  // Policies keep their configured order; a policy listed twice collapses
  // into one series since its rows are identical.
  std::vector<std::string> order;
  std::map<std::string, std::map<DayIndex, Money>, std::less<>> daily;
  std::map<std::tuple<std::string, std::string, DayIndex>, Money> seen;
  for (const auto& row : trace.rows) {
    auto [it, fresh] = seen.try_emplace({row.policy, row.campaign_id, row.day}, row.reward);
    if (!fresh) {
      if (it->second != row.reward) {
        throw std::logic_error("policy " + row.policy + " produced two different rewards for " +
                               row.campaign_id + " on day " + std::to_string(row.day));
      }
      continue;
    }
    if (!daily.contains(row.policy)) order.push_back(row.policy);
    auto& by_day = daily[row.policy];
    by_day[row.day] = by_day[row.day] + row.reward;
  }
  std::vector<SummaryRow> out;
  for (const auto& policy : order) {
    Money running;
    for (const auto& [day, profit] : daily[policy]) {
      running = running + profit;
      out.push_back({trace.config.n_min, policy, day, profit, running});
    }
  }
  return out;
}

std::optional<double> uplift_percent(Money agent, Money baseline) {
  if (baseline.cents() == 0) return std::nullopt;
  const double diff = static_cast<double>(agent.cents() - baseline.cents());
  return diff / std::fabs(static_cast<double>(baseline.cents())) * 100.0;
}

std::vector<UpliftRow> uplift_table(const std::vector<SummaryRow>& summary,
                                    std::string_view reference) {
  // Final cumulative per (n_min, policy), keeping first-seen order.
  std::vector<std::pair<std::size_t, std::string>> keys;
  std::map<std::pair<std::size_t, std::string>, Money> finals;
  for (const auto& r : summary) {
    auto key = std::make_pair(r.n_min, r.policy);
    if (!finals.contains(key)) keys.push_back(key);
    finals[key] = r.cumulative_profit;
  }
  std::vector<UpliftRow> out;
  for (const auto& key : keys) {
    auto ref = finals.find({key.first, std::string(reference)});
    if (ref == finals.end()) continue;
    UpliftRow row;
    row.n_min = key.first;
    row.agent = std::string(reference);
    row.baseline = key.second;
    row.agent_cumulative = ref->second;
    row.baseline_cumulative = finals[key];
    row.uplift = uplift_percent(row.agent_cumulative, row.baseline_cumulative);
    out.push_back(std::move(row));
  }
  return out;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << csv::join({r.policy, r.campaign_id, std::to_string(r.day),
                      std::to_string(r.decision.retained.size()),
                      r.decision.clamped ? "true" : "false",
                      std::to_string(r.decision.repair_attempts), r.reward.to_string(),
                      r.cumulative.to_string()})
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << csv::join({std::to_string(r.n_min), r.policy, std::to_string(r.day),
                      r.daily_profit.to_string(), r.cumulative_profit.to_string()})
        << '\n';
  }
}

void write_uplift_csv(std::ostream& out, const std::vector<UpliftRow>& rows) {
  out << kUpliftHeader << '\n';
  for (const auto& r : rows) {
    std::string pct;
    if (r.uplift) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f", *r.uplift);
      pct = buf;
    }
    out << csv::join({std::to_string(r.n_min), r.agent, r.baseline,
                      r.agent_cumulative.to_string(), r.baseline_cumulative.to_string(),
                      pct})
        << '\n';
  }
}

std::string content_hash(std::string_view bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < length; ++i) {
    const unsigned char b = digest[i];
    hex += kHex[b >> 4];
    hex += kHex[b & 0xf];
  }
  return hex;
}

std::string render_manifest(const ManifestInfo& info) {
  using nlohmann::ordered_json;
  const SimulationConfig& c = info.config;
  ordered_json policies = ordered_json::array();
  for (auto p : c.policies) policies.push_back(std::string(policy_name(p)));

  ordered_json config;
  config["n_min"] = c.n_min;
  config["window"] = c.window;
  config["decision_start"] = c.decision_start;
  config["decision_end"] = c.decision_end;
  config["policies"] = policies;
  config["seed"] = c.seed;
  config["k_shot"] = c.k_shot;
  config["compounding"] = c.compounding;
  config["prune_to"] = c.prune_to;
  config["max_repairs"] = c.max_repairs;
  config["same_campaign_only"] = c.campaign_scoped_memory;
  config["overview_char_cap"] = c.overview_char_cap;
  if (!info.sweep.empty()) config["sweep"] = info.sweep;

  ordered_json m;
  m["config"] = config;
  m["response_model"] = c.budget_model.name();
  m["input_log"] = {{"path", info.log_path}, {"hash", info.log_hash}};
  if (info.memory_path) m["memory"] = *info.memory_path;
  m["backend"] = info.backend;
  if (info.script_path) {
    m["script"] = {{"path", *info.script_path}, {"hash", info.script_hash.value_or("")}};
  }
  m["flagged_campaigns"] = info.flagged_campaigns;
  return m.dump(2) + "\n";
}

}  // namespace kwprune
