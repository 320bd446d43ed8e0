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
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kwprune/campaign_data.hpp"

namespace kwprune {

enum class Metric {
  MeanImpressions,
  MeanClicks,
  MeanConversions,
  Ctr,
  Cvr,
  ImpressionSlope,
  TotalProfit,
  TotalCost,
  Score,
};

inline constexpr Metric kAllMetrics[] = {
    Metric::MeanImpressions, Metric::MeanClicks,      Metric::MeanConversions,
    Metric::Ctr,             Metric::Cvr,             Metric::ImpressionSlope,
    Metric::TotalProfit,     Metric::TotalCost,       Metric::Score};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

enum class Comparator { Ge, Le, Gt, Lt, Eq };
enum class Direction { Ascending, Descending };

std::string_view comparator_symbol(Comparator c);

class UnknownMetric : public std::runtime_error {
 public:
  explicit UnknownMetric(std::string_view what)
      : std::runtime_error(std::string(what)) {}
};

struct TableRow {
  KeywordStats stats;
  double score = 0;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct TableProvenance {
  std::string campaign_id;
  DayIndex end_day = 0;
  int window = 7;

  friend bool operator==(const TableProvenance&, const TableProvenance&) = default;
};

/// The tabular input the pruning tools operate on.
struct StatsTable {
  std::vector<TableRow> rows;
  TableProvenance provenance;
  /// Set once a scoring tool has run; gates access to Metric::Score.
  bool scored = false;

  /// Rows in keyword-ascending order. Throws std::invalid_argument on
  /// duplicate keywords.
  static StatsTable from_stats(std::vector<KeywordStats> stats,
                               TableProvenance provenance = {});

  std::vector<std::string> keywords() const;
  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  friend bool operator==(const StatsTable&, const StatsTable&) = default;
};

/// Column value; throws UnknownMetric for Score on an unscored table.
double metric_value(const StatsTable& table, const TableRow& row, Metric metric);

// The tool set. Every tool is a pure function of its arguments and never
// introduces keywords that were not in its input.

/// Keeps rows satisfying `metric cmp threshold`; survivors keep their order.
StatsTable tool_filter(const StatsTable& table, Metric metric, Comparator cmp,
                       double threshold);

/// Stable sort on one column.
StatsTable tool_sort(const StatsTable& table, Metric metric, Direction dir);

/// First min(n, size) rows. n must be at least 1.
StatsTable tool_keep_top(const StatsTable& table, std::size_t n);

/// Removes the last min(n, size - 1) rows, so a non-empty table never empties.
StatsTable tool_drop_bottom(const StatsTable& table, std::size_t n);

struct ScoreTerm {
  Metric metric;
  double weight;

  friend bool operator==(const ScoreTerm&, const ScoreTerm&) = default;
};

/// Writes score = sum(weight * minmax(metric)) per row, with constant columns
/// normalising to 0.5, then stably orders rows by descending score.
StatsTable tool_score(const StatsTable& table, std::span<const ScoreTerm> terms);

/// Exposes impression_slope for later steps. The slope is already computed
/// by window_stats, so the table passes through unchanged.
StatsTable tool_trend(const StatsTable& table);

}  // namespace kwprune
