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

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kwprune/simulator.hpp"

namespace kwprune {

/// Campaign-aggregated profit of one policy on one day.
struct SummaryRow {
  std::size_t n_min = 0;
  std::string policy;
  DayIndex day = 0;
  Money daily_profit;
  Money cumulative_profit;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// One row per (policy, day), in policy then day order.
std::vector<SummaryRow> summarize(const SimulationTrace& trace);

/// (agent - baseline) / |baseline| * 100; nullopt when the baseline is zero.
std::optional<double> uplift_percent(Money agent, Money baseline);

struct UpliftRow {
  std::size_t n_min = 0;
  std::string agent;
  std::string baseline;
  Money agent_cumulative;
  Money baseline_cumulative;
  std::optional<double> uplift;
};

/// Compares the final cumulative profit of \p reference against every policy
/// in \p summary, per n_min.
std::vector<UpliftRow> uplift_table(const std::vector<SummaryRow>& summary,
                                    std::string_view reference);

inline constexpr std::string_view kTraceHeader =
    "policy,campaign_id,day,retained_count,clamped,repair_attempts,reward,cumulative";
inline constexpr std::string_view kSummaryHeader =
    "n_min,policy,day,daily_profit,cumulative_profit";
inline constexpr std::string_view kUpliftHeader =
    "n_min,agent,baseline,agent_cumulative,baseline_cumulative,uplift_percent";

void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_uplift_csv(std::ostream& out, const std::vector<UpliftRow>& rows);

/// Git blob object id (SHA-1 over "blob <size>\0" + content), lowercase hex.
std::string content_hash(std::string_view bytes);

struct ManifestInfo {
  SimulationConfig config;
  std::string log_path;
  std::string log_hash;
  std::optional<std::string> memory_path;
  std::optional<std::string> script_path;
  std::optional<std::string> script_hash;
  std::string backend;
  std::vector<std::size_t> sweep;
  std::vector<std::string> flagged_campaigns;
};

/// Pretty-printed JSON, stable key order, no timestamps.
std::string render_manifest(const ManifestInfo& info);

}  // namespace kwprune
