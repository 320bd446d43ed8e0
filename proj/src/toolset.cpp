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
#include "kwprune/toolset.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace kwprune {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::MeanImpressions: return "mean_impressions";
    case Metric::MeanClicks: return "mean_clicks";
    case Metric::MeanConversions: return "mean_conversions";
    case Metric::Ctr: return "ctr";
    case Metric::Cvr: return "cvr";
    case Metric::ImpressionSlope: return "impression_slope";
    case Metric::TotalProfit: return "total_profit";
    case Metric::TotalCost: return "total_cost";
    case Metric::Score: return "score";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::Ge: return ">=";
    case Comparator::Le: return "<=";
    case Comparator::Gt: return ">";
    case Comparator::Lt: return "<";
    case Comparator::Eq: return "=";
  }
  return "?";
}

StatsTable StatsTable::from_stats(std::vector<KeywordStats> stats,
                                  TableProvenance provenance) {
  std::sort(stats.begin(), stats.end(),
            [](const auto& a, const auto& b) { return a.keyword < b.keyword; });
  StatsTable t;
  t.provenance = std::move(provenance);
  for (auto& s : stats) {
    if (!t.rows.empty() && t.rows.back().stats.keyword == s.keyword) {
      throw std::invalid_argument("duplicate keyword in stats table: " + s.keyword);
    }
    t.rows.push_back(TableRow{std::move(s), 0.0});
  }
  return t;
}

std::vector<std::string> StatsTable::keywords() const {
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.stats.keyword);
  return out;
}

double metric_value(const StatsTable& table, const TableRow& row, Metric metric) {
  const auto& s = row.stats;
  switch (metric) {
    case Metric::MeanImpressions: return s.mean_impressions;
    case Metric::MeanClicks: return s.mean_clicks;
    case Metric::MeanConversions: return s.mean_conversions;
    case Metric::Ctr: return s.ctr;
    case Metric::Cvr: return s.cvr;
    case Metric::ImpressionSlope: return s.impression_slope;
    case Metric::TotalProfit: return s.total_profit.to_double();
    case Metric::TotalCost: return s.total_cost.to_double();
    case Metric::Score:
      if (!table.scored) {
        throw UnknownMetric("metric 'score' is not available before scoring");
      }
      return row.score;
  }
  throw UnknownMetric("unknown metric");
}

namespace {

void require_addressable(const StatsTable& table, Metric metric) {
  if (metric == Metric::Score && !table.scored) {
    throw UnknownMetric("metric 'score' is not available before scoring");
  }
}

bool compare(double v, Comparator cmp, double threshold) {
  switch (cmp) {
    case Comparator::Ge: return v >= threshold;
    case Comparator::Le: return v <= threshold;
    case Comparator::Gt: return v > threshold;
    case Comparator::Lt: return v < threshold;
    case Comparator::Eq: return v == threshold;
  }
  return false;
}

}  // namespace

StatsTable tool_filter(const StatsTable& table, Metric metric, Comparator cmp,
                       double threshold) {
  require_addressable(table, metric);
  StatsTable out{{}, table.provenance, table.scored};
  for (const auto& row : table.rows) {
    if (compare(metric_value(table, row, metric), cmp, threshold)) {
      out.rows.push_back(row);
    }
  }
  return out;
}

StatsTable tool_sort(const StatsTable& table, Metric metric, Direction dir) {
  require_addressable(table, metric);
  StatsTable out = table;
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [&](const TableRow& a, const TableRow& b) {
                     double va = metric_value(table, a, metric);
                     double vb = metric_value(table, b, metric);
                     return dir == Direction::Ascending ? va < vb : va > vb;
                   });
  return out;
}

StatsTable tool_keep_top(const StatsTable& table, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("keep_top requires n >= 1");
  }
  StatsTable out = table;
  if (out.rows.size() > n) out.rows.resize(n);
  return out;
}

StatsTable tool_drop_bottom(const StatsTable& table, std::size_t n) {
  StatsTable out = table;
  if (out.rows.empty()) return out;
  std::size_t drop = std::min(n, out.rows.size() - 1);
  out.rows.resize(out.rows.size() - drop);
  return out;
}

StatsTable tool_score(const StatsTable& table, std::span<const ScoreTerm> terms) {
  for (const auto& term : terms) {
    if (term.metric == Metric::Score) {
      throw UnknownMetric("'score' cannot be used as a scoring term");
    }
  }
  StatsTable out = table;
  for (auto& row : out.rows) row.score = 0.0;
  for (const auto& term : terms) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& row : table.rows) {
      double v = metric_value(table, row, term.metric);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
      double v = metric_value(table, table.rows[i], term.metric);
      double norm = hi > lo ? (v - lo) / (hi - lo) : 0.5;
      out.rows[i].score += term.weight * norm;
    }
  }
  out.scored = true;
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const TableRow& a, const TableRow& b) { return a.score > b.score; });
  return out;
}

StatsTable tool_trend(const StatsTable& table) { return table; }

}  // namespace kwprune
