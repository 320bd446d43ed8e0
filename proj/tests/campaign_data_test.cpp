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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <tuple>
#include <sstream>
#include <vector>

#include "kwprune/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace kwprune {
namespace {

using testing::rec;

ExperimentLog ingest_text(const std::string& body) {
  std::istringstream in(std::string(kLogHeader) + "\n" + body);
  return ingest_log(in);
}

TEST(Ingest, SingleRowMapsFields) {
  auto log = ingest_text("c1,kw_a,1,1000,50,5,25.00,12.50\n");
  ASSERT_EQ(log.records().size(), 1u);
  const auto& r = log.records()[0];
  EXPECT_EQ(r.campaign_id, "c1");
  EXPECT_EQ(r.keyword, "kw_a");
  EXPECT_EQ(r.day, 1);
  EXPECT_EQ(r.impressions, 1000);
  EXPECT_EQ(r.clicks, 50);
  EXPECT_EQ(r.conversions, 5);
  EXPECT_EQ(r.cost.to_string(), "25.00");
  EXPECT_EQ(r.profit.to_string(), "12.50");
  ASSERT_EQ(log.campaigns().size(), 1u);
  EXPECT_EQ(log.campaigns()[0].keywords, std::vector<std::string>{"kw_a"});
  EXPECT_EQ(log.horizon(), (DayRange{1, 1}));
}

TEST(Ingest, DuplicateKeyIsRejected) {
  try {
    ingest_text("c1,kw_a,1,1000,50,5,25.00,12.50\nc1,kw_a,1,10,1,0,1.00,0.00\n");
    FAIL() << "expected DuplicateKey";
  } catch (const DuplicateKey& e) {
    EXPECT_EQ(e.campaign, "c1");
    EXPECT_EQ(e.keyword, "kw_a");
    EXPECT_EQ(e.day, 1);
  }
}

TEST(Ingest, ClicksAboveImpressionsViolatesInvariant) {
  try {
    ingest_text("c1,kw_a,1,1000,50,5,25.00,12.50\nc1,kw_b,1,50,60,0,1.00,0.00\n");
    FAIL() << "expected InvariantViolation";
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.line, 3u);
    EXPECT_EQ(e.reason, "clicks > impressions");
  }
}

TEST(Ingest, OtherInvariantsAndMalformedRows) {
  EXPECT_THROW(ingest_text("c1,a,1,10,5,6,1.00,0.00\n"), InvariantViolation);
  EXPECT_THROW(ingest_text("c1,a,1,10,5,1,-1.00,0.00\n"), InvariantViolation);
  EXPECT_THROW(ingest_text("c1,a,1,-10,0,0,1.00,0.00\n"), DataError);
  EXPECT_THROW(ingest_text("c1,a,1,10,5\n"), MalformedRow);
  EXPECT_THROW(ingest_text("c1,a,x,10,5,1,1.00,0.00\n"), MalformedRow);
  EXPECT_THROW(ingest_text("c1,a,1,10,5,1,1.001,0.00\n"), MalformedRow);
  std::istringstream no_header("c1,a,1,10,5,1,1.00,0.00\n");
  EXPECT_THROW(ingest_log(no_header), DataError);
}

TEST(Ingest, IsoDatesMapToDayIndices) {
  auto log = ingest_text(
      "c1,a,2024-03-02,10,1,0,1.00,0.50\n"
      "c1,a,2024-03-01,10,1,0,1.00,0.50\n"
      "c1,a,2024-03-05,10,1,0,1.00,0.50\n");
  std::vector<DayIndex> days;
  for (const auto& r : log.records()) days.push_back(r.day);
  EXPECT_EQ(days, (std::vector<DayIndex>{1, 2, 5}));
}

TEST(Ingest, QuotedKeywordsSurviveRoundTrip) {
  auto log = ingest_text(
      "c1,\"cheap, fast\",1,10,1,0,1.00,0.50\n"
      "c1,\"say \"\"hi\"\"\",1,10,1,0,1.00,0.50\n"
      "c1,火锅,2,10,1,0,1.00,-0.50\n");
  std::ostringstream out;
  write_log(out, log);
  std::istringstream again(out.str());
  EXPECT_EQ(ingest_log(again), log);
}

TEST(Ingest, RoundTripOfSyntheticLog) {
  SyntheticConfig cfg;
  cfg.campaigns = 5;
  cfg.seed = 3;
  auto log = generate_synthetic_log(cfg);
  std::ostringstream out;
  write_log(out, log);
  std::istringstream again(out.str());
  EXPECT_EQ(ingest_log(again), log);
}

TEST(Ingest, RecordsAreSortedByCampaignKeywordDay) {
  auto log = ingest_text(
      "c2,b,2,10,1,0,1.00,0.50\n"
      "c1,b,1,10,1,0,1.00,0.50\n"
      "c1,a,2,10,1,0,1.00,0.50\n"
      "c1,a,1,10,1,0,1.00,0.50\n");
  const auto& r = log.records();
  for (std::size_t i = 1; i < r.size(); ++i) {
    EXPECT_LT(std::tie(r[i - 1].campaign_id, r[i - 1].keyword, r[i - 1].day),
              std::tie(r[i].campaign_id, r[i].keyword, r[i].day));
  }
  EXPECT_THROW(log.campaign("c9"), UnknownCampaign);
  EXPECT_EQ(log.series("c1", "a").size(), 2u);
  EXPECT_EQ(log.find("c1", "a", 3), nullptr);
}

TEST(Validate, CollectsViolationsWithLineNumbers) {
  std::istringstream in(std::string(kLogHeader) +
                        "\nc1,a,1,10,1,0,1.00,0.50\nc1,b,1,50,60,0,1.00,0.00\n"
                        "c1,c,1,zz,1,0,1.00,0.50\n");
  auto report = validate_log(in);
  ASSERT_EQ(report.violations.size(), 2u);
  EXPECT_EQ(report.violations[0].line, 3u);
  EXPECT_EQ(report.violations[0].reason, "clicks > impressions");
  EXPECT_EQ(report.violations[1].line, 4u);
  EXPECT_EQ(report.record_count, 1u);
}

TEST(Slope, DocumentedExamples) {
  std::vector<double> flat{5, 5, 5, 5}, line{0, 2, 4, 6}, wiggle{1, 3, 2};
  EXPECT_DOUBLE_EQ(least_squares_slope(flat), 0.0);
  EXPECT_DOUBLE_EQ(least_squares_slope(line), 2.0);
  EXPECT_NEAR(least_squares_slope(wiggle), 0.5, 1e-12);
  std::vector<double> one{3};
  EXPECT_THROW(least_squares_slope(one), TooFewPoints);
}

TEST(Slope, TranslationAndScaleProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1000, 1000);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(2 + trial % 6);
    for (auto& x : v) x = u(rng);
    double c = u(rng), a = u(rng) / 100;
    auto shifted = v, scaled = v;
    for (auto& x : shifted) x += c;
    for (auto& x : scaled) x *= a;
    double s = least_squares_slope(v);
    EXPECT_NEAR(least_squares_slope(shifted), s, 1e-9);
    EXPECT_NEAR(least_squares_slope(scaled), a * s, 1e-9 * (1 + std::abs(a * s)));
    EXPECT_NEAR(s, oracle::slope(v), 1e-9);
  }
}

ExperimentLog seven_day_log() {
  std::vector<KeywordDayRecord> rs;
  for (int d = 1; d <= 7; ++d) {
    rs.push_back(rec("c1", "flat", d, 100, d == 1 ? 50 : 0, 0, 100, 0));
    if (d >= 5) rs.push_back(rec("c1", "rising", d, 1 + 2 * (d - 5), 0, 0, 0, 100));
  }
  return ExperimentLog::build(rs);
}

TEST(WindowStats, ConstantSeriesAndRatios) {
  auto log = seven_day_log();
  auto stats = window_stats(log, "c1", 7);
  ASSERT_EQ(stats.size(), 2u);
  const auto& flat = stats[0];
  EXPECT_EQ(flat.keyword, "flat");
  EXPECT_DOUBLE_EQ(flat.mean_impressions, 100.0);
  EXPECT_DOUBLE_EQ(flat.impression_slope, 0.0);
  EXPECT_DOUBLE_EQ(flat.ctr, 50.0 / 700.0);
  EXPECT_DOUBLE_EQ(flat.cvr, 0.0);
  EXPECT_EQ(flat.total_cost.to_string(), "7.00");
}

TEST(WindowStats, CtrOfFiftyClicksOverThousandImpressions) {
  std::vector<KeywordDayRecord> rs;
  for (int d = 1; d <= 7; ++d) rs.push_back(rec("c", "k", d, d <= 5 ? 200 : 0, d <= 5 ? 10 : 0, 0, 0, 0));
  auto stats = window_stats(ExperimentLog::build(rs), "c", 7);
  EXPECT_DOUBLE_EQ(stats[0].ctr, 0.05);
}

TEST(WindowStats, MissingDaysCountAsZero) {
  auto log = seven_day_log();
  auto s = window_stats(log, "c1", 7)[1];
  EXPECT_EQ(s.keyword, "rising");
  EXPECT_DOUBLE_EQ(s.mean_impressions, (1 + 3 + 5) / 7.0);
  auto three = window_stats(log, "c1", 7, 3)[1];
  EXPECT_NEAR(three.impression_slope, 2.0, 1e-12);
  EXPECT_EQ(three.total_profit.to_string(), "3.00");
}

TEST(WindowStats, ThreeDaySlopeExample) {
  std::vector<KeywordDayRecord> rs{rec("c", "k", 1, 1, 0, 0, 0, 0), rec("c", "k", 2, 3, 0, 0, 0, 0),
                                   rec("c", "k", 3, 2, 0, 0, 0, 0)};
  auto s = window_stats(ExperimentLog::build(rs), "c", 3, 3);
  EXPECT_NEAR(s[0].impression_slope, 0.5, 1e-12);
}

TEST(WindowStats, WindowOfOneEqualsRawDayRatios) {
  SyntheticConfig cfg;
  cfg.campaigns = 3;
  auto log = generate_synthetic_log(cfg);
  for (const auto& c : log.campaigns()) {
    for (const auto& s : window_stats(log, c.id, 10, 1)) {
      const auto* r = log.find(c.id, s.keyword, 10);
      ASSERT_NE(r, nullptr);
      EXPECT_DOUBLE_EQ(s.mean_impressions, static_cast<double>(r->impressions));
      double ctr = r->impressions ? static_cast<double>(r->clicks) / r->impressions : 0;
      double cvr = r->clicks ? static_cast<double>(r->conversions) / r->clicks : 0;
      EXPECT_DOUBLE_EQ(s.ctr, ctr);
      EXPECT_DOUBLE_EQ(s.cvr, cvr);
      EXPECT_GE(s.ctr, 0);
      EXPECT_LE(s.ctr, 1);
      EXPECT_LE(s.cvr, 1);
    }
  }
}

TEST(WindowStats, Errors) {
  auto log = seven_day_log();
  EXPECT_THROW(window_stats(log, "nope", 7), UnknownCampaign);
  EXPECT_THROW(window_stats(log, "c1", 6), WindowOutOfRange);
  EXPECT_THROW(window_stats(log, "c1", 8, 2), WindowOutOfRange);
  EXPECT_THROW(window_stats(log, "c1", 7, 0), WindowOutOfRange);
}

}  // namespace
}  // namespace kwprune
