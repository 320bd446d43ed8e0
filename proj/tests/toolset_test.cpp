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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "support.hpp"

namespace kwprune {
namespace {

using testing::keywords_of;
using KW = std::vector<std::string>;

StatsTable impressions_table(std::vector<std::pair<std::string, double>> v) {
  std::vector<KeywordStats> rows;
  for (auto& [kw, imp] : v) {
    auto s = testing::stats(kw);
    s.mean_impressions = imp;
    rows.push_back(s);
  }
  return StatsTable::from_stats(std::move(rows));
}

TEST(Table, StartsKeywordAscendingAndRejectsDuplicates) {
  auto t = impressions_table({{"c", 1}, {"a", 2}, {"b", 3}});
  EXPECT_EQ(keywords_of(t), (KW{"a", "b", "c"}));
  EXPECT_THROW(impressions_table({{"a", 1}, {"a", 2}}), std::invalid_argument);
}

TEST(Filter, KeepsRowsSatisfyingPredicate) {
  auto t = impressions_table({{"a", 100}, {"b", 50}, {"c", 10}});
  EXPECT_EQ(keywords_of(tool_filter(t, Metric::MeanImpressions, Comparator::Ge, 50)),
            (KW{"a", "b"}));
  EXPECT_EQ(tool_filter(t, Metric::Ctr, Comparator::Ge, 0), t);
  EXPECT_EQ(keywords_of(tool_filter(t, Metric::MeanImpressions, Comparator::Lt, 50)), KW{"c"});
  EXPECT_EQ(keywords_of(tool_filter(t, Metric::MeanImpressions, Comparator::Eq, 50)), KW{"b"});
  EXPECT_EQ(keywords_of(tool_filter(t, Metric::MeanImpressions, Comparator::Gt, 50)), KW{"a"});
  EXPECT_EQ(keywords_of(tool_filter(t, Metric::MeanImpressions, Comparator::Le, 50)),
            (KW{"b", "c"}));
}

TEST(Filter, ScoreBeforeScoringIsUnknown) {
  auto t = impressions_table({{"a", 1}});
  EXPECT_THROW(tool_filter(t, Metric::Score, Comparator::Ge, 0), UnknownMetric);
  EXPECT_THROW(tool_sort(t, Metric::Score, Direction::Ascending), UnknownMetric);
}

TEST(Sort, DescendingAndStable) {
  auto t = impressions_table({{"a", 10}, {"b", 30}, {"c", 20}});
  auto sorted = tool_sort(t, Metric::MeanImpressions, Direction::Descending);
  EXPECT_EQ(keywords_of(sorted), (KW{"b", "c", "a"}));
  EXPECT_EQ(tool_sort(sorted, Metric::MeanImpressions, Direction::Descending), sorted);
  auto flat = impressions_table({{"x", 1}, {"y", 1}, {"z", 1}});
  EXPECT_EQ(keywords_of(tool_sort(flat, Metric::MeanImpressions, Direction::Descending)),
            (KW{"x", "y", "z"}));
}

TEST(Sort, StabilityPropertyOnRandomTables) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::string, double>> v;
    int n = 1 + trial % 12;
    for (int i = 0; i < n; ++i) v.push_back({"k" + std::to_string(i), double(rng() % 4)});
    auto t = impressions_table(v);
    auto pre = tool_sort(t, Metric::Ctr, Direction::Ascending);  // all ctr 0: no-op
    ASSERT_EQ(pre, t);
    auto s = tool_sort(t, Metric::MeanImpressions, Direction::Ascending);
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
      const auto& a = s.rows[i - 1].stats;
      const auto& b = s.rows[i].stats;
      ASSERT_LE(a.mean_impressions, b.mean_impressions);
      if (a.mean_impressions == b.mean_impressions) {
        ASSERT_LT(a.keyword, b.keyword);
      }
    }
  }
}

TEST(KeepTop, ClampsToTableSize) {
  auto t = impressions_table({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}, {"e", 5}});
  EXPECT_EQ(keywords_of(tool_keep_top(t, 3)), (KW{"a", "b", "c"}));
  auto two = impressions_table({{"a", 1}, {"b", 2}});
  EXPECT_EQ(tool_keep_top(two, 5), two);
  EXPECT_THROW(tool_keep_top(two, 0), std::invalid_argument);
}

TEST(DropBottom, NeverEmptiesTheTable) {
  auto t = tool_sort(impressions_table({{"a", 10}, {"b", 30}, {"c", 20}}),
                     Metric::MeanImpressions, Direction::Descending);
  EXPECT_EQ(keywords_of(tool_drop_bottom(t, 1)), (KW{"b", "c"}));
  EXPECT_EQ(tool_drop_bottom(t, 0), t);
  EXPECT_EQ(tool_drop_bottom(t, 5).size(), 1u);
}

TEST(Score, MinMaxNormalisation) {
  auto t = testing::ctr_table({{"a", 0.0}, {"b", 0.1}, {"c", 0.2}});
  ScoreTerm term{Metric::Ctr, 1.0};
  auto s = tool_score(t, std::span(&term, 1));
  ASSERT_TRUE(s.scored);
  std::map<std::string, double> by_kw;
  for (const auto& r : s.rows) by_kw[r.stats.keyword] = r.score;
  EXPECT_NEAR(by_kw["a"], 0.0, 1e-12);
  EXPECT_NEAR(by_kw["b"], 0.5, 1e-12);
  EXPECT_NEAR(by_kw["c"], 1.0, 1e-12);
  EXPECT_EQ(keywords_of(s), (KW{"c", "b", "a"}));
  EXPECT_NO_THROW(tool_filter(s, Metric::Score, Comparator::Ge, 0.5));
}

TEST(Score, ConstantColumnScoresHalfTheWeightSum) {
  auto t = testing::ctr_table({{"a", 0.3}, {"b", 0.3}});
  std::vector<ScoreTerm> terms{{Metric::Ctr, 2.0}, {Metric::Cvr, 1.0}};
  for (const auto& r : tool_score(t, terms).rows) EXPECT_NEAR(r.score, 1.5, 1e-12);
}

TEST(Score, EqualWeightsOnIdenticalColumnsKeepRanking) {
  std::vector<KeywordStats> rows;
  for (int i = 0; i < 6; ++i) {
    auto s = testing::stats(std::string(1, char('a' + i)));
    s.ctr = (i * 7 % 5) / 10.0;
    s.mean_clicks = s.ctr;
    rows.push_back(s);
  }
  auto t = StatsTable::from_stats(rows);
  ScoreTerm single{Metric::Ctr, 1.0};
  std::vector<ScoreTerm> pair{{Metric::Ctr, 0.5}, {Metric::MeanClicks, 0.5}};
  EXPECT_EQ(keywords_of(tool_score(t, std::span(&single, 1))), keywords_of(tool_score(t, pair)));
  ScoreTerm bad{Metric::Score, 1.0};
  EXPECT_THROW(tool_score(t, std::span(&bad, 1)), UnknownMetric);
}

TEST(Trend, IsIdentityAndEnablesSlopeOrdering) {
  std::vector<KeywordStats> rows;
  double slopes[] = {2, 0, -3};
  for (int i = 0; i < 3; ++i) {
    auto s = testing::stats(std::string(1, char('a' + i)));
    s.impression_slope = slopes[i];
    rows.push_back(s);
  }
  auto t = StatsTable::from_stats(rows);
  EXPECT_EQ(tool_trend(t), t);
  EXPECT_EQ(keywords_of(tool_sort(tool_trend(t), Metric::ImpressionSlope, Direction::Ascending)),
            (KW{"c", "b", "a"}));
  EXPECT_TRUE(tool_filter(t, Metric::ImpressionSlope, Comparator::Lt, -5).empty());
}

TEST(Tools, NeverIntroduceKeywords) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::string, double>> v;
    for (int i = 0; i < 8; ++i) v.push_back({"k" + std::to_string(i), double(rng() % 100)});
    auto t = impressions_table(v);
    auto kws = t.keywords();
    std::set<std::string> in(kws.begin(), kws.end());
    for (const auto& out :
         {tool_filter(t, Metric::MeanImpressions, Comparator::Gt, 50.0),
          tool_sort(t, Metric::MeanImpressions, Direction::Descending), tool_keep_top(t, 3),
          tool_drop_bottom(t, 2), tool_trend(t)}) {
      for (const auto& kw : out.keywords()) EXPECT_TRUE(in.contains(kw));
    }
  }
}

}  // namespace
}  // namespace kwprune
