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
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kwprune/money.hpp"

namespace kwprune {

/// 1-based day index within an experiment.
using DayIndex = int;

struct KeywordDayRecord {
  std::string campaign_id;
  std::string keyword;
  DayIndex day = 0;
  std::int64_t impressions = 0;
  std::int64_t clicks = 0;
  std::int64_t conversions = 0;
  Money cost;
  Money profit;

  friend bool operator==(const KeywordDayRecord&,
                         const KeywordDayRecord&) = default;
};

struct Campaign {
  std::string id;
  Money daily_budget;
  /// Keyword-ascending, duplicate free.
  std::vector<std::string> keywords;

  friend bool operator==(const Campaign&, const Campaign&) = default;
};

/// Windowed per-keyword summary produced by window_stats().
struct KeywordStats {
  std::string keyword;
  int window_days = 7;
  double mean_impressions = 0;
  double mean_clicks = 0;
  double mean_conversions = 0;
  double ctr = 0;
  double cvr = 0;
  double impression_slope = 0;
  Money total_profit;
  Money total_cost;

  friend bool operator==(const KeywordStats&, const KeywordStats&) = default;
};

struct DayRange {
  DayIndex first = 0;
  DayIndex last = 0;

  friend bool operator==(const DayRange&, const DayRange&) = default;
};

// -- errors ------------------------------------------------------------------

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRow : public DataError {
 public:
  MalformedRow(std::size_t line_no, std::string why);
  std::size_t line;
  std::string reason;
};

class DuplicateKey : public DataError {
 public:
  DuplicateKey(std::string campaign_id, std::string kw, DayIndex d);
  std::string campaign;
  std::string keyword;
  DayIndex day;
};

class InvariantViolation : public DataError {
 public:
  InvariantViolation(std::size_t line_no, std::string why);
  std::size_t line;
  std::string reason;
};

class UnknownCampaign : public DataError {
 public:
  explicit UnknownCampaign(std::string_view id);
};

class WindowOutOfRange : public DataError {
 public:
  using DataError::DataError;
};

class TooFewPoints : public DataError {
 public:
  using DataError::DataError;
};

class InvalidConfig : public DataError {
 public:
  using DataError::DataError;
};

// -- log ---------------------------------------------------------------------

/// A validated, immutable keyword performance log.
///
/// Records are sorted by (campaign_id, keyword, day). Campaigns are derived
/// from the records: the keyword universe is every keyword the campaign logs,
/// and the daily budget is the largest total spend the campaign recorded on a
/// single day (at least 0.01).
class ExperimentLog {
 public:
  ExperimentLog() = default;

  /// Validates record invariants and uniqueness, then sorts and indexes.
  /// Throws InvariantViolation (line 0) or DuplicateKey.
  static ExperimentLog build(std::vector<KeywordDayRecord> records);

  const std::vector<KeywordDayRecord>& records() const { return records_; }
  const std::vector<Campaign>& campaigns() const { return campaigns_; }
  DayRange horizon() const { return horizon_; }
  bool empty() const { return records_.empty(); }

  /// Throws UnknownCampaign.
  const Campaign& campaign(std::string_view id) const;

  /// Null when the (campaign, keyword, day) triple was not logged.
  const KeywordDayRecord* find(std::string_view campaign_id,
                               std::string_view keyword, DayIndex day) const;

  /// All logged days of one keyword, day-ascending. Empty if unknown.
  std::span<const KeywordDayRecord> series(std::string_view campaign_id,
                                           std::string_view keyword) const;

  friend bool operator==(const ExperimentLog& a, const ExperimentLog& b) {
    return a.records_ == b.records_ && a.campaigns_ == b.campaigns_ &&
           a.horizon_ == b.horizon_;
  }

 private:
  std::vector<KeywordDayRecord> records_;
  std::vector<Campaign> campaigns_;
  DayRange horizon_;
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>,
           std::less<>>
      ranges_;
};

/// Expected header row of the log CSV.
inline constexpr std::string_view kLogHeader =
    "campaign_id,keyword,date,impressions,clicks,conversions,cost,profit";

/// Reads the log CSV. The date column holds either integer day indices or
/// ISO-8601 dates (YYYY-MM-DD); dates map to indices with the earliest date as
/// day 1. Throws MalformedRow, DuplicateKey or InvariantViolation for the first
/// problem found.
ExperimentLog ingest_log(std::istream& source);

struct Violation {
  std::size_t line = 0;
  std::string reason;
};

struct ValidationReport {
  std::size_t record_count = 0;
  std::size_t campaign_count = 0;
  std::size_t keyword_count = 0;  // unique keyword strings across campaigns
  DayRange horizon;
  std::vector<Violation> violations;
};

/// Like ingest_log but collects every problem instead of stopping at the first.
ValidationReport validate_log(std::istream& source);

/// Writes the canonical CSV (integer day indices, two-digit currency).
void write_log(std::ostream& sink, const ExperimentLog& log);

/// Ordinary least-squares slope of values against abscissae 0..n-1.
/// Throws TooFewPoints for fewer than two values.
double least_squares_slope(std::span<const double> values);

/// Stats(lambda) for one campaign over days [end_day - window + 1, end_day].
///
/// Missing days count as zero-activity days. Returns one row per keyword,
/// keyword-ascending; `keywords` restricts the set (defaults to the campaign
/// universe). A one-day window reports a zero slope.
std::vector<KeywordStats> window_stats(
    const ExperimentLog& log, std::string_view campaign_id, DayIndex end_day,
    int window = 7,
    std::optional<std::span<const std::string>> keywords = std::nullopt);

}  // namespace kwprune
