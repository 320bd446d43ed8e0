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

#include <algorithm>
#include <set>
#include <stdexcept>

#include "kwprune/plan.hpp"
#include "kwprune/prompts.hpp"

namespace kwprune {

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Identity: return "identity";
    case PolicyKind::ImpressionRank: return "impression_rank";
    case PolicyKind::CtrRank: return "ctr_rank";
    case PolicyKind::CvrRank: return "cvr_rank";
    case PolicyKind::ImpressionRegression: return "impression_regression";
    case PolicyKind::Oracle: return "oracle";
    case PolicyKind::KpAgent: return "kp_agent";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  for (auto k : {PolicyKind::Identity, PolicyKind::ImpressionRank, PolicyKind::CtrRank, PolicyKind::CvrRank,
                 PolicyKind::ImpressionRegression, PolicyKind::Oracle,
                 PolicyKind::KpAgent}) {
    if (policy_name(k) == name) return k;
  }
  return std::nullopt;
}

std::size_t DecisionContext::floor() const {
  return std::min(n_min, campaign.keywords.size());
}

DecisionContext make_context(const ExperimentLog& log, Campaign campaign, DayIndex day,
                             int window, std::size_t n_min) {
  std::sort(campaign.keywords.begin(), campaign.keywords.end());
  auto stats = window_stats(log, campaign.id, day, window,
                            std::span<const std::string>(campaign.keywords));
  DecisionContext ctx;
  ctx.stats = StatsTable::from_stats(std::move(stats), {campaign.id, day, window});
  ctx.campaign = std::move(campaign);
  ctx.day = day;
  ctx.n_min = n_min;
  return ctx;
}

namespace {

// Drops the `prune_count` lowest-valued keywords; value ties drop the
// lexicographically smaller keyword first.
PruningDecision drop_lowest(const DecisionContext& ctx, std::size_t prune_count,
                            std::string_view name,
                            const std::function<double(const TableRow&)>& value) {
  const std::size_t size = ctx.stats.size();
  const std::size_t allowed = size - std::min(ctx.floor(), size);
  const std::size_t drop = std::min(prune_count, allowed);

  std::vector<const TableRow*> ranked;
  for (const auto& row : ctx.stats.rows) ranked.push_back(&row);
  std::sort(ranked.begin(), ranked.end(), [&](const TableRow* a, const TableRow* b) {
    double va = value(*a), vb = value(*b);
    if (va != vb) return va < vb;
    return a->stats.keyword < b->stats.keyword;
  });
  std::set<std::string_view> dropped;
  for (std::size_t i = 0; i < drop; ++i) dropped.insert(ranked[i]->stats.keyword);

  PruningDecision d;
  d.policy_name = std::string(name);
  d.clamped = drop < prune_count;
  std::vector<std::string> keywords = ctx.stats.keywords();
  std::sort(keywords.begin(), keywords.end());
  for (auto& kw : keywords) {
    if (!dropped.contains(kw)) d.retained.push_back(std::move(kw));
  }
  return d;
}

PruningDecision rank_on(const DecisionContext& ctx, std::size_t prune_count,
                        PolicyKind kind, Metric metric) {
  return drop_lowest(ctx, prune_count, policy_name(kind), [&](const TableRow& row) {
    return metric_value(ctx.stats, row, metric);
  });
}

}  // namespace

PruningDecision keep_all(const DecisionContext& ctx) {
  PruningDecision d;
  d.policy_name = std::string(policy_name(PolicyKind::Identity));
  d.retained = ctx.campaign.keywords;
  return d;
}

PruningDecision impression_rank(const DecisionContext& ctx, std::size_t prune_count) {
  return rank_on(ctx, prune_count, PolicyKind::ImpressionRank, Metric::MeanImpressions);
}

PruningDecision ctr_rank(const DecisionContext& ctx, std::size_t prune_count) {
  return rank_on(ctx, prune_count, PolicyKind::CtrRank, Metric::Ctr);
}

PruningDecision cvr_rank(const DecisionContext& ctx, std::size_t prune_count) {
  return rank_on(ctx, prune_count, PolicyKind::CvrRank, Metric::Cvr);
}

PruningDecision impression_regression(const DecisionContext& ctx,
                                      std::size_t prune_count) {
  for (const auto& row : ctx.stats.rows) {
    if (row.stats.window_days < 2) {
      throw TooFewPoints("impression regression needs a window of at least 2 days");
    }
  }
  return rank_on(ctx, prune_count, PolicyKind::ImpressionRegression,
                 Metric::ImpressionSlope);
}

PruningDecision hindsight_oracle(const DecisionContext& ctx,
                                 const ProfitByKeyword& future_profit,
                                 std::size_t prune_count, const BudgetModel& model) {
  for (const auto& row : ctx.stats.rows) {
    if (!future_profit.contains(row.stats.keyword)) {
      throw MissingFutureProfit("no next-day profit for keyword '" + row.stats.keyword +
                                "'");
    }
  }
  // Every candidate subset has the same size, hence the same budget
  // multiplier, and the response is increasing in the profit sum: dropping the
  // lowest next-day profits maximises the scaled reward.
  (void)model;
  return drop_lowest(ctx, prune_count, policy_name(PolicyKind::Oracle),
                     [&](const TableRow& row) {
                       return future_profit.find(row.stats.keyword)->second.to_double();
                     });
}

PruningDecision kp_agent_decide(const DecisionContext& ctx, const MemoryStore& memory,
                                ChatBackend& gateway, const AgentSettings& settings) {
  std::vector<KeywordStats> rows;
  for (const auto& r : ctx.stats.rows) rows.push_back(r.stats);
  Overview overview = render_overview(ctx.campaign.id, ctx.day, rows);

  RetrievalOptions retrieval = settings.retrieval;
  retrieval.before_day = ctx.day;
  if (settings.campaign_scoped) retrieval.campaign_id = ctx.campaign.id;
  auto hits = retrieve_topk(memory, overview, retrieval);
  std::vector<MemoryEntry> examples;
  for (auto& h : hits) examples.push_back(std::move(h.entry));

  std::string knowledge =
      gateway.complete(build_knowledge_prompt(overview, examples, toolset_documentation()))
          .text;
  std::string plan_text = extract_plan_text(gateway.complete(build_code_prompt(knowledge)).text);

  PruningDecision d;
  d.policy_name = std::string(policy_name(PolicyKind::KpAgent));
  d.knowledge = knowledge;
  d.overview = overview;
  for (int attempt = 0;; ++attempt) {
    try {
      PruningPlan plan = parse_plan(plan_text);
      PlanOutcome outcome = interpret_plan(plan, ctx.stats, ctx.n_min);
      d.retained = std::move(outcome.retained);
      d.clamped = outcome.clamped;
      d.plan_text = plan_text;
      d.repair_attempts = attempt;
      return d;
    } catch (const PlanError& e) {
      if (attempt >= settings.max_repairs) {
        d.retained = ctx.campaign.keywords;
        d.repair_attempts = attempt;
        return d;
      }
      plan_text = extract_plan_text(
          gateway.complete(build_repair_prompt(knowledge, plan_text, explain_error(e))).text);
    }
  }
}

std::size_t prune_count_for(const DecisionContext& ctx, std::size_t prune_to) {
  const std::size_t target = prune_to == 0 ? ctx.n_min : prune_to;
  const std::size_t size = ctx.campaign.keywords.size();
  return size > target ? size - target : 0;
}

PruningDecision decide(PolicyKind kind, const DecisionContext& ctx,
                       const PolicyResources& resources) {
  const std::size_t prune = prune_count_for(ctx, resources.prune_to);
  switch (kind) {
    case PolicyKind::Identity: return keep_all(ctx);
    case PolicyKind::ImpressionRank: return impression_rank(ctx, prune);
    case PolicyKind::CtrRank: return ctr_rank(ctx, prune);
    case PolicyKind::CvrRank: return cvr_rank(ctx, prune);
    case PolicyKind::ImpressionRegression: return impression_regression(ctx, prune);
    case PolicyKind::Oracle: {
      if (!resources.log) throw std::invalid_argument("oracle policy needs the log");
      ProfitByKeyword future;
      for (const auto& kw : ctx.campaign.keywords) {
        const auto* r = resources.log->find(ctx.campaign.id, kw, ctx.day + 1);
        future.emplace(kw, r ? r->profit : Money{});
      }
      return hindsight_oracle(ctx, future, prune, resources.budget_model);
    }
    case PolicyKind::KpAgent: {
      if (!resources.memory || !resources.gateway) {
        throw std::invalid_argument("kp_agent policy needs memory and a gateway");
      }
      return kp_agent_decide(ctx, *resources.memory, *resources.gateway, resources.agent);
    }
  }
  throw std::invalid_argument("unknown policy");
}

}  // namespace kwprune
