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

#include "kwprune/policy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>

#include "kwprune/plan.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace kwprune {
namespace {

using KW = std::vector<std::string>;

// Context over hand-written stats; `field` receives each keyword's value.
DecisionContext context(const std::vector<std::pair<std::string, double>>& values,
                        double KeywordStats::*field, std::size_t n_min) {
  std::vector<KeywordStats> rows;
  DecisionContext ctx;
  ctx.campaign.id = "c1";
  ctx.campaign.daily_budget = Money::parse("70.00");
  for (const auto& [kw, v] : values) {
    auto s = testing::stats(kw);
    s.*field = v;
    rows.push_back(s);
    ctx.campaign.keywords.push_back(kw);
  }
  std::sort(ctx.campaign.keywords.begin(), ctx.campaign.keywords.end());
  ctx.stats = StatsTable::from_stats(rows, {"c1", 7, 7});
  ctx.day = 7;
  ctx.n_min = n_min;
  return ctx;
}

TEST(Baselines, ImpressionRank) {
  auto ctx = context({{"a", 100}, {"b", 50}, {"c", 10}}, &KeywordStats::mean_impressions, 2);
  auto d = impression_rank(ctx, 1);
  EXPECT_EQ(d.retained, (KW{"a", "b"}));
  EXPECT_EQ(d.policy_name, "impression_rank");
  EXPECT_FALSE(d.clamped);
  EXPECT_EQ(impression_rank(ctx, 0).retained, (KW{"a", "b", "c"}));
  auto equal = context({{"a", 5}, {"b", 5}, {"c", 5}}, &KeywordStats::mean_impressions, 1);
  EXPECT_EQ(impression_rank(equal, 1).retained, (KW{"b", "c"}));
}

TEST(Baselines, CtrRank) {
  auto ctx = context({{"a", 0.10}, {"b", 0.05}, {"c", 0.01}}, &KeywordStats::ctr, 1);
  EXPECT_EQ(ctr_rank(ctx, 1).retained, (KW{"a", "b"}));
  auto zero = context({{"silent", 0.0}, {"weak", 0.01}}, &KeywordStats::ctr, 1);
  EXPECT_EQ(ctr_rank(zero, 1).retained, KW{"weak"});
  auto at_floor = context({{"a", 0.1}, {"b", 0.2}, {"c", 0.3}}, &KeywordStats::ctr, 3);
  auto d = ctr_rank(at_floor, 2);
  EXPECT_EQ(d.retained, (KW{"a", "b", "c"}));
  EXPECT_TRUE(d.clamped);
}

TEST(Baselines, CvrRank) {
  auto ctx = context({{"a", 0.3}, {"b", 0.2}, {"c", 0.1}}, &KeywordStats::cvr, 1);
  EXPECT_EQ(cvr_rank(ctx, 2).retained, KW{"a"});
  EXPECT_EQ(cvr_rank(ctx, 0).retained, (KW{"a", "b", "c"}));
  auto tie = context({{"x", 0.2}, {"y", 0.2}}, &KeywordStats::cvr, 1);
  EXPECT_EQ(cvr_rank(tie, 1).retained, KW{"y"});
}

TEST(Baselines, ImpressionRegression) {
  auto ctx = context({{"a", 2}, {"b", 0}, {"c", -3}}, &KeywordStats::impression_slope, 1);
  EXPECT_EQ(impression_regression(ctx, 1).retained, (KW{"a", "b"}));
  auto flat = context({{"a", 1}, {"b", 1}, {"c", 1}}, &KeywordStats::impression_slope, 1);
  EXPECT_EQ(impression_regression(flat, 1).retained, (KW{"b", "c"}));
  EXPECT_EQ(impression_regression(ctx, 0).retained, (KW{"a", "b", "c"}));
  for (auto& row : ctx.stats.rows) row.stats.window_days = 1;
  EXPECT_THROW(impression_regression(ctx, 1), TooFewPoints);
}

TEST(Baselines, MatchBruteForceOracleAndStayMonotone) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 10;
    std::vector<std::pair<std::string, double>> values;
    for (std::size_t i = 0; i < n; ++i) {
      values.push_back({"k" + std::to_string(rng() % 100), static_cast<double>(rng() % 4)});
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end(),
                             [](auto& a, auto& b) { return a.first == b.first; }),
                 values.end());
    std::size_t n_min = 1 + rng() % 5, prune = rng() % 8;
    auto ctx = context(values, &KeywordStats::ctr, n_min);
    KW kws;
    std::vector<double> vs;
    for (auto& [k, v] : values) kws.push_back(k), vs.push_back(v);
    auto got = ctr_rank(ctx, prune).retained;
    EXPECT_EQ(got, oracle::bottom_drop(kws, vs, prune, ctx.floor()));

    // Raising a retained keyword's value keeps it retained.
    if (!got.empty()) {
      auto bumped = values;
      for (auto& [k, v] : bumped) if (k == got[0]) v += 1 + rng() % 3;
      auto again = ctr_rank(context(bumped, &KeywordStats::ctr, n_min), prune).retained;
      EXPECT_NE(std::find(again.begin(), again.end(), got[0]), again.end());
    }
  }
}

TEST(Oracle, DropsLowestFutureProfit) {
  auto ctx = context({{"a", 0}, {"b", 0}, {"c", 0}}, &KeywordStats::ctr, 1);
  ProfitByKeyword future{{"a", Money::parse("10")}, {"b", Money::parse("-5")}, {"c", Money::parse("1")}};
  BudgetModel linear;
  auto d = hindsight_oracle(ctx, future, 1, linear);
  EXPECT_EQ(d.retained, (KW{"a", "c"}));
  EXPECT_EQ(d.policy_name, "oracle");
  EXPECT_EQ(hindsight_oracle(ctx, future, 0, linear).retained, (KW{"a", "b", "c"}));
  ProfitByKeyword tie{{"a", Money::parse("2")}, {"b", Money::parse("2")}, {"c", Money::parse("9")}};
  EXPECT_EQ(hindsight_oracle(ctx, tie, 1, linear).retained, (KW{"b", "c"}));
  ProfitByKeyword missing{{"a", Money::parse("2")}};
  EXPECT_THROW(hindsight_oracle(ctx, missing, 1, linear), MissingFutureProfit);
}

TEST(Oracle, MaximisesScaledRewardOverAllSubsets) {
  std::mt19937_64 rng(2);
  BudgetModel concave{BudgetModel::Response::Concave, 0.5};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::string, double>> values;
    ProfitByKeyword future;
    std::size_t n = 2 + rng() % 7;
    for (std::size_t i = 0; i < n; ++i) {
      std::string kw = "k" + std::to_string(i);
      values.push_back({kw, 0});
      future[kw] = Money::from_cents(static_cast<std::int64_t>(rng() % 2000) - 800);
    }
    std::size_t prune = rng() % n;
    auto ctx = context(values, &KeywordStats::ctr, 1);
    auto d = hindsight_oracle(ctx, future, prune, concave);
    auto reward = [&](const KW& kept) {
      Money s;
      for (auto& k : kept) s += future[k];
      return apply_response(s, concave, n, kept.size());
    };
    Money best = Money::from_cents(INT64_MIN / 4);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != n - prune) continue;
      KW kept;
      for (std::size_t i = 0; i < n; ++i) if (mask >> i & 1) kept.push_back(values[i].first);
      best = std::max(best, reward(kept));
    }
    EXPECT_EQ(reward(d.retained), best);
  }
}

StatsTable seven_keyword_table() {
  return testing::ctr_table({{"a", 0.07}, {"b", 0.01}, {"c", 0.05}, {"d", 0.02},
                             {"e", 0.06}, {"f", 0.03}, {"g", 0.04}});
}

DecisionContext agent_context() {
  DecisionContext ctx;
  ctx.stats = seven_keyword_table();
  ctx.stats.provenance = {"c1", 7, 7};
  ctx.campaign = Campaign{"c1", Money::parse("70.00"), ctx.stats.keywords()};
  ctx.day = 7;
  ctx.n_min = 5;
  return ctx;
}

TEST(Agent, ScriptedPlanSelectsTopFive) {
  ScriptedBackend gw;
  gw.push(AgentRole::Knowledge, "Rank by ctr.");
  gw.push(AgentRole::Code, "SORT ctr DESC\nKEEP_TOP 5");
  MemoryStore memory;
  auto d = kp_agent_decide(agent_context(), memory, gw, {});
  EXPECT_EQ(d.retained, (KW{"a", "e", "c", "g", "f"}));
  EXPECT_EQ(d.repair_attempts, 0);
  EXPECT_EQ(d.plan_text, "SORT ctr DESC\nKEEP_TOP 5");
  EXPECT_EQ(d.knowledge, "Rank by ctr.");
  ASSERT_TRUE(d.overview.has_value());
  EXPECT_EQ(d.overview->day, 7);
}

TEST(Agent, RepairsInvalidPlanOnce) {
  ScriptedBackend gw;
  gw.push(AgentRole::Knowledge, "Rank by ctr.");
  gw.push(AgentRole::Code, "KEEP_TOP 5");
  gw.push(AgentRole::Code, "SORT ctr DESC\nKEEP_TOP 5");
  MemoryStore memory;
  auto d = kp_agent_decide(agent_context(), memory, gw, {});
  EXPECT_EQ(d.retained, (KW{"a", "e", "c", "g", "f"}));
  EXPECT_EQ(d.repair_attempts, 1);
  EXPECT_EQ(gw.remaining(AgentRole::Code), 0u);
}

TEST(Agent, FallsBackToKeepAllAfterMaxRepairs) {
  ScriptedBackend gw;
  gw.push(AgentRole::Knowledge, "?");
  for (int i = 0; i < 4; ++i) gw.push(AgentRole::Code, "KEEP_TOP 5");
  MemoryStore memory;
  auto d = kp_agent_decide(agent_context(), memory, gw, {});
  EXPECT_EQ(d.retained, seven_keyword_table().keywords());
  EXPECT_EQ(d.repair_attempts, 3);
  EXPECT_FALSE(d.plan_text.has_value());
  EXPECT_EQ(gw.remaining(AgentRole::Code), 0u);
}

TEST(Agent, GatewayErrorsPropagate) {
  ScriptedBackend gw;
  MemoryStore memory;
  EXPECT_THROW(kp_agent_decide(agent_context(), memory, gw, {}), ScriptExhausted);
}

// Records every prompt so tests can inspect what the agent saw.
class RecordingBackend : public ChatBackend {
 public:
  explicit RecordingBackend(ScriptedBackend& inner) : inner_(inner) {}
  ChatResponse complete(const ChatRequest& r) override {
    prompts.push_back(r);
    return inner_.complete(r);
  }
  std::vector<ChatRequest> prompts;

 private:
  ScriptedBackend& inner_;
};

TEST(Agent, OnlySeesMemoryFromEarlierDays) {
  MemoryStore memory;
  auto ctx = agent_context();
  MemoryEntry old;
  old.overview = Overview{"overview from day six", "c1", 6};
  old.reflection = "lesson from day six";
  old.inserted_at = {6, 0};
  memory.append(old);
  MemoryEntry same_day = old;
  same_day.overview.day = 7;
  same_day.reflection = "lesson from day seven";
  same_day.inserted_at = {7, 1};
  memory.append(same_day);

  ScriptedBackend script;
  script.push(AgentRole::Knowledge, "k");
  script.push(AgentRole::Code, "TREND");
  RecordingBackend gw(script);
  kp_agent_decide(ctx, memory, gw, {});
  ASSERT_FALSE(gw.prompts.empty());
  const auto& prompt = gw.prompts[0].user_prompt;
  EXPECT_NE(prompt.find("lesson from day six"), std::string::npos);
  EXPECT_EQ(prompt.find("lesson from day seven"), std::string::npos);
}

TEST(Agent, RetainedSetEqualsReplayedPlan) {
  std::mt19937_64 rng(6);
  const char* plans[] = {"SORT ctr DESC\nKEEP_TOP 2", "FILTER ctr > 0.035", "SCORE ctr * 1\nDROP_BOTTOM 4",
                         "TREND\nSORT ctr ASC\nKEEP_TOP 6"};
  for (const char* p : plans) {
    ScriptedBackend gw;
    gw.push(AgentRole::Knowledge, "k");
    gw.push(AgentRole::Code, p);
    MemoryStore memory;
    auto ctx = agent_context();
    auto d = kp_agent_decide(ctx, memory, gw, {});
    ASSERT_TRUE(d.plan_text);
    auto replay = interpret_plan(parse_plan(*d.plan_text), ctx.stats, ctx.n_min);
    EXPECT_EQ(d.retained, replay.retained) << p;
    EXPECT_GE(d.retained.size(), ctx.floor());
  }
}

TEST(Decide, DispatchesByKindAndComputesPruneCount) {
  auto ctx = context({{"a", 3}, {"b", 2}, {"c", 1}, {"d", 0}}, &KeywordStats::ctr, 2);
  EXPECT_EQ(prune_count_for(ctx, 0), 2u);
  EXPECT_EQ(prune_count_for(ctx, 3), 1u);
  EXPECT_EQ(prune_count_for(ctx, 9), 0u);
  PolicyResources res;
  EXPECT_EQ(decide(PolicyKind::CtrRank, ctx, res).retained, (KW{"a", "b"}));
  EXPECT_EQ(decide(PolicyKind::Identity, ctx, res).retained.size(), 4u);
  EXPECT_THROW(decide(PolicyKind::Oracle, ctx, res), std::invalid_argument);
  EXPECT_THROW(decide(PolicyKind::KpAgent, ctx, res), std::invalid_argument);
  for (auto k : {PolicyKind::ImpressionRank, PolicyKind::CtrRank, PolicyKind::CvrRank,
                 PolicyKind::ImpressionRegression, PolicyKind::Oracle, PolicyKind::KpAgent}) {
    EXPECT_EQ(parse_policy(policy_name(k)), k);
  }
  EXPECT_FALSE(parse_policy("random").has_value());
}

}  // namespace
}  // namespace kwprune
