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
#include "kwprune/campaign_data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <iterator>
#include <set>
#include <sstream>
#include <tuple>
#include <variant>

#include "kwprune/csv.hpp"

namespace kwprune {

MalformedRow::MalformedRow(std::size_t line_no, std::string why)
    : DataError("malformed row at line " + std::to_string(line_no) + ": " + why),
      line(line_no),
      reason(std::move(why)) {}

DuplicateKey::DuplicateKey(std::string campaign_id, std::string kw, DayIndex d)
    : DataError("duplicate record (" + campaign_id + ", " + kw + ", day " +
                std::to_string(d) + ")"),
      campaign(std::move(campaign_id)),
      keyword(std::move(kw)),
      day(d) {}

InvariantViolation::InvariantViolation(std::size_t line_no, std::string why)
    : DataError("invariant violation at line " + std::to_string(line_no) + ": " +
                why),
      line(line_no),
      reason(std::move(why)) {}

UnknownCampaign::UnknownCampaign(std::string_view id)
    : DataError("unknown campaign '" + std::string(id) + "'") {}

namespace {

std::optional<std::string> check_record(const KeywordDayRecord& r) {
  if (r.impressions < 0) return "impressions < 0";
  if (r.clicks < 0) return "clicks < 0";
  if (r.conversions < 0) return "conversions < 0";
  if (r.cost < Money{}) return "cost < 0";
  if (r.clicks > r.impressions) return "clicks > impressions";
  if (r.conversions > r.clicks) return "conversions > clicks";
  if (r.day < 1) return "day index < 1";
  return std::nullopt;
}

auto record_key(const KeywordDayRecord& r) {
  return std::tie(r.campaign_id, r.keyword, r.day);
}

// -- ingestion scanner -------------------------------------------------------

enum class IssueKind { Malformed, Duplicate, Invariant };

struct Issue {
  IssueKind kind;
  std::size_t line;
  std::string reason;
  KeywordDayRecord record;  // populated for duplicates
};

using RawDate = std::variant<std::int64_t, std::chrono::sys_days>;

struct RawRow {
  KeywordDayRecord record;
  RawDate date;
  std::size_t line;
};

// Returns the byte offset of the first invalid UTF-8 sequence, if any.
std::optional<std::size_t> first_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    char32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                    (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<RawDate> parse_date(std::string_view s) {
  if (auto v = parse_int(s)) {
    return RawDate{*v};
  }
  // YYYY-MM-DD
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = parse_int(s.substr(0, 4));
  auto m = parse_int(s.substr(5, 2));
  auto d = parse_int(s.substr(8, 2));
  if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                  std::chrono::month{static_cast<unsigned>(*m)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return RawDate{std::chrono::sys_days{ymd}};
}

struct ScanResult {
  std::vector<KeywordDayRecord> records;
  std::vector<Issue> issues;
};

// Parses and validates the CSV. With stop_at_first set, returns as soon as
// one issue is recorded.
ScanResult scan(std::istream& source, bool stop_at_first) {
  ScanResult out;
  auto add_issue = [&](IssueKind kind, std::size_t line, std::string why) {
    out.issues.push_back(Issue{kind, line, std::move(why), {}});
    return stop_at_first;
  };

  std::string text{std::istreambuf_iterator<char>(source),
                   std::istreambuf_iterator<char>()};
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);
  if (auto bad = first_invalid_utf8(text)) {
    auto line = 1 + static_cast<std::size_t>(
                        std::count(text.begin(), text.begin() + *bad, '\n'));
    add_issue(IssueKind::Malformed, line, "invalid UTF-8");
    return out;
  }

  std::istringstream in(text);
  csv::Reader reader(in);
  std::vector<RawRow> rows;
  bool saw_int_date = false;
  bool saw_iso_date = false;
  try {
    auto header = reader.next();
    std::string expected(kLogHeader);
    if (!header || csv::join(header->fields) != expected) {
      add_issue(IssueKind::Malformed, 1, "expected header '" + expected + "'");
      return out;
    }
    while (auto rec = reader.next()) {
      const auto& f = rec->fields;
      const std::size_t line = rec->line;
      if (f.size() == 1 && f[0].empty()) continue;  // blank line
      if (f.size() != 8) {
        if (add_issue(IssueKind::Malformed, line,
                      "expected 8 fields, got " + std::to_string(f.size())))
          return out;
        continue;
      }
      RawRow row;
      row.line = line;
      auto& r = row.record;
      r.campaign_id = f[0];
      r.keyword = f[1];
      std::string problem;
      if (r.campaign_id.empty()) problem = "empty campaign_id";
      else if (r.keyword.empty()) problem = "empty keyword";
      auto date = parse_date(f[2]);
      if (problem.empty() && !date) problem = "bad date '" + f[2] + "'";
      std::optional<std::int64_t> counts[3];
      const char* names[3] = {"impressions", "clicks", "conversions"};
      for (int k = 0; k < 3 && problem.empty(); ++k) {
        counts[k] = parse_int(f[3 + k]);
        if (!counts[k]) problem = std::string("bad ") + names[k] + " '" + f[3 + k] + "'";
      }
      if (problem.empty()) {
        try {
          r.cost = Money::parse(f[6]);
        } catch (const std::exception&) {
          problem = "bad cost '" + f[6] + "'";
        }
      }
      if (problem.empty()) {
        try {
          r.profit = Money::parse(f[7]);
        } catch (const std::exception&) {
          problem = "bad profit '" + f[7] + "'";
        }
      }
      if (!problem.empty()) {
        if (add_issue(IssueKind::Malformed, line, problem)) return out;
        continue;
      }
      if (std::holds_alternative<std::int64_t>(*date)) {
        saw_int_date = true;
      } else {
        saw_iso_date = true;
      }
      if (saw_int_date && saw_iso_date) {
        if (add_issue(IssueKind::Malformed, line,
                      "mixed integer and ISO-8601 dates"))
          return out;
        continue;
      }
      r.impressions = *counts[0];
      r.clicks = *counts[1];
      r.conversions = *counts[2];
      row.date = *date;
      rows.push_back(std::move(row));
    }
  } catch (const csv::ParseError& e) {
    add_issue(IssueKind::Malformed, e.line, e.reason);
    return out;
  }

  std::optional<std::chrono::sys_days> first_date;
  for (const auto& row : rows) {
    if (auto* d = std::get_if<std::chrono::sys_days>(&row.date)) {
      if (!first_date || *d < *first_date) first_date = *d;
    }
  }

  std::set<std::tuple<std::string, std::string, DayIndex>> seen;
  for (auto& row : rows) {
    auto& r = row.record;
    if (auto* idx = std::get_if<std::int64_t>(&row.date)) {
      if (*idx < 1 || *idx > 1'000'000) {
        if (add_issue(IssueKind::Malformed, row.line,
                      "day index out of range: " + std::to_string(*idx)))
          return out;
        continue;
      }
      r.day = static_cast<DayIndex>(*idx);
    } else {
      auto d = std::get<std::chrono::sys_days>(row.date);
      r.day = static_cast<DayIndex>((d - *first_date).count()) + 1;
    }
    if (auto why = check_record(r)) {
      if (add_issue(IssueKind::Invariant, row.line, *why)) return out;
      continue;
    }
    if (!seen.emplace(r.campaign_id, r.keyword, r.day).second) {
      out.issues.push_back(Issue{IssueKind::Duplicate, row.line,
                                 "duplicate (campaign_id, keyword, date)", r});
      if (stop_at_first) return out;
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace

// -- ExperimentLog -----------------------------------------------------------

ExperimentLog ExperimentLog::build(std::vector<KeywordDayRecord> records) {
  for (const auto& r : records) {
    if (r.campaign_id.empty() || r.keyword.empty()) {
      throw InvariantViolation(0, "empty campaign_id or keyword");
    }
    if (auto why = check_record(r)) {
      throw InvariantViolation(0, *why + " (" + r.campaign_id + ", " +
                                      r.keyword + ", day " +
                                      std::to_string(r.day) + ")");
    }
  }
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return record_key(a) < record_key(b); });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (record_key(records[i - 1]) == record_key(records[i])) {
      throw DuplicateKey(records[i].campaign_id, records[i].keyword,
                         records[i].day);
    }
  }

  ExperimentLog log;
  log.records_ = std::move(records);
  if (!log.records_.empty()) {
    log.horizon_ = {log.records_.front().day, log.records_.front().day};
  }
  std::map<DayIndex, Money> spend_by_day;
  auto flush_campaign = [&](Campaign& c) {
    Money peak = Money::from_cents(1);
    for (const auto& [day, spend] : spend_by_day) peak = std::max(peak, spend);
    c.daily_budget = peak;
    log.campaigns_.push_back(std::move(c));
    spend_by_day.clear();
  };

  Campaign current;
  for (std::size_t i = 0; i < log.records_.size();) {
    const auto& r = log.records_[i];
    if (current.id != r.campaign_id) {
      if (!current.id.empty()) flush_campaign(current);
      current = Campaign{r.campaign_id, Money{}, {}};
    }
    std::size_t j = i;
    while (j < log.records_.size() && log.records_[j].campaign_id == r.campaign_id &&
           log.records_[j].keyword == r.keyword) {
      const auto& rj = log.records_[j];
      log.horizon_.first = std::min(log.horizon_.first, rj.day);
      log.horizon_.last = std::max(log.horizon_.last, rj.day);
      spend_by_day[rj.day] += rj.cost;
      ++j;
    }
    current.keywords.push_back(r.keyword);
    log.ranges_.emplace(std::make_pair(r.campaign_id, r.keyword),
                        std::make_pair(i, j));
    i = j;
  }
  if (!current.id.empty()) flush_campaign(current);
  return log;
}

const Campaign& ExperimentLog::campaign(std::string_view id) const {
  auto it = std::lower_bound(
      campaigns_.begin(), campaigns_.end(), id,
      [](const Campaign& c, std::string_view v) { return c.id < v; });
  if (it == campaigns_.end() || it->id != id) throw UnknownCampaign(id);
  return *it;
}

std::span<const KeywordDayRecord> ExperimentLog::series(
    std::string_view campaign_id, std::string_view keyword) const {
  auto it = ranges_.find(std::make_pair(std::string(campaign_id),
                                        std::string(keyword)));
  if (it == ranges_.end()) return {};
  auto [b, e] = it->second;
  return std::span<const KeywordDayRecord>(records_.data() + b, e - b);
}

const KeywordDayRecord* ExperimentLog::find(std::string_view campaign_id,
                                            std::string_view keyword,
                                            DayIndex day) const {
  auto s = series(campaign_id, keyword);
  auto it = std::lower_bound(
      s.begin(), s.end(), day,
      [](const KeywordDayRecord& r, DayIndex d) { return r.day < d; });
  if (it == s.end() || it->day != day) return nullptr;
  return &*it;
}

// -- ingestion ---------------------------------------------------------------

ExperimentLog ingest_log(std::istream& source) {
  auto result = scan(source, true);
  if (!result.issues.empty()) {
    const auto& issue = result.issues.front();
    switch (issue.kind) {
      case IssueKind::Malformed:
        throw MalformedRow(issue.line, issue.reason);
      case IssueKind::Invariant:
        throw InvariantViolation(issue.line, issue.reason);
      case IssueKind::Duplicate:
        throw DuplicateKey(issue.record.campaign_id, issue.record.keyword,
                           issue.record.day);
    }
  }
  return ExperimentLog::build(std::move(result.records));
}

ValidationReport validate_log(std::istream& source) {
  auto result = scan(source, false);
  ValidationReport report;
  for (auto& issue : result.issues) {
    report.violations.push_back(Violation{issue.line, std::move(issue.reason)});
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.line < b.line; });
  auto log = ExperimentLog::build(std::move(result.records));
  report.record_count = log.records().size();
  report.campaign_count = log.campaigns().size();
  std::set<std::string_view> keywords;
  for (const auto& c : log.campaigns()) {
    keywords.insert(c.keywords.begin(), c.keywords.end());
  }
  report.keyword_count = keywords.size();
  report.horizon = log.horizon();
  return report;
}

void write_log(std::ostream& sink, const ExperimentLog& log) {
  sink << kLogHeader << '\n';
  for (const auto& r : log.records()) {
    sink << csv::join({r.campaign_id, r.keyword, std::to_string(r.day),
                       std::to_string(r.impressions), std::to_string(r.clicks),
                       std::to_string(r.conversions), r.cost.to_string(),
                       r.profit.to_string()})
         << '\n';
  }
}

// -- statistics --------------------------------------------------------------

double least_squares_slope(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw TooFewPoints("least-squares slope needs at least 2 points, got " +
                       std::to_string(n));
  }
  const double x_mean = static_cast<double>(n - 1) / 2.0;
  double y_mean = 0;
  for (double v : values) y_mean += v;
  y_mean /= static_cast<double>(n);
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (values[i] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<KeywordStats> window_stats(
    const ExperimentLog& log, std::string_view campaign_id, DayIndex end_day,
    int window, std::optional<std::span<const std::string>> keywords) {
  const Campaign& campaign = log.campaign(campaign_id);
  if (window < 1) {
    throw WindowOutOfRange("window must be positive, got " +
                           std::to_string(window));
  }
  const DayIndex start = end_day - window + 1;
  const DayRange h = log.horizon();
  if (start < h.first || end_day > h.last) {
    throw WindowOutOfRange("window [" + std::to_string(start) + ", " +
                           std::to_string(end_day) + "] outside log horizon [" +
                           std::to_string(h.first) + ", " +
                           std::to_string(h.last) + "]");
  }

  std::vector<std::string> names;
  if (keywords) {
    names.assign(keywords->begin(), keywords->end());
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  } else {
    names = campaign.keywords;
  }

  std::vector<KeywordStats> out;
  out.reserve(names.size());
  std::vector<double> impressions(static_cast<std::size_t>(window));
  for (auto& name : names) {
    KeywordStats ks;
    ks.window_days = window;
    std::int64_t impr = 0, clicks = 0, conv = 0;
    std::fill(impressions.begin(), impressions.end(), 0.0);
    for (const auto& r : log.series(campaign_id, name)) {
      if (r.day < start || r.day > end_day) continue;
      impr += r.impressions;
      clicks += r.clicks;
      conv += r.conversions;
      ks.total_cost += r.cost;
      ks.total_profit += r.profit;
      impressions[static_cast<std::size_t>(r.day - start)] =
          static_cast<double>(r.impressions);
    }
    const auto w = static_cast<double>(window);
    ks.mean_impressions = static_cast<double>(impr) / w;
    ks.mean_clicks = static_cast<double>(clicks) / w;
    ks.mean_conversions = static_cast<double>(conv) / w;
    ks.ctr = impr > 0 ? static_cast<double>(clicks) / static_cast<double>(impr) : 0.0;
    ks.cvr = clicks > 0 ? static_cast<double>(conv) / static_cast<double>(clicks) : 0.0;
    ks.impression_slope = window >= 2 ? least_squares_slope(impressions) : 0.0;
    ks.keyword = std::move(name);
    out.push_back(std::move(ks));
  }
  return out;
}

}  // namespace kwprune
