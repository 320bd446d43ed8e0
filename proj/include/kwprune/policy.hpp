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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kwprune/budget.hpp"
#include "kwprune/campaign_data.hpp"
#include "kwprune/llm.hpp"
#include "kwprune/memory.hpp"
#include "kwprune/toolset.hpp"

namespace kwprune {

enum class PolicyKind {
  /// Keeps every keyword; the replay reference.
  Identity,
  ImpressionRank,
  CtrRank,
  CvrRank,
  ImpressionRegression,
  Oracle,
  KpAgent,
};

std::string_view policy_name(PolicyKind kind);
std::optional<PolicyKind> parse_policy(std::string_view name);

/// The bandit context x = (W, lambda) for one campaign on one decision day.
struct DecisionContext {
  /// Campaign with its current keyword set W.
  Campaign campaign;
  DayIndex day = 0;
  /// Window statistics for exactly campaign.keywords, ending at `day`.
  StatsTable stats;
  std::size_t n_min = 1;

  /// min(n_min, |W|)
  std::size_t floor() const;
};

/// Builds the context for \p campaign (whose keywords are the current set)
/// using the window ending at \p day.
DecisionContext make_context(const ExperimentLog& log, Campaign campaign, DayIndex day,
                             int window, std::size_t n_min);

struct PruningDecision {
  /// W', a subset of the context's keywords.
  std::vector<std::string> retained;
  std::string policy_name;
  std::optional<std::string> plan_text;
  std::optional<std::string> knowledge;
  std::optional<Overview> overview;
  int repair_attempts = 0;
  bool clamped = false;
};

PruningDecision keep_all(const DecisionContext& ctx);

// -- ranking baselines -------------------------------------------------------
//
// Each drops the prune_count keywords ranked lowest on its metric, never going
// below the floor. Among equal values the lexicographically smaller keyword is
// dropped first. Retained keywords stay keyword-ascending.

PruningDecision impression_rank(const DecisionContext& ctx, std::size_t prune_count);
PruningDecision ctr_rank(const DecisionContext& ctx, std::size_t prune_count);
PruningDecision cvr_rank(const DecisionContext& ctx, std::size_t prune_count);
/// Throws TooFewPoints for windows shorter than two days.
PruningDecision impression_regression(const DecisionContext& ctx, std::size_t prune_count);

class MissingFutureProfit : public DataError {
 public:
  using DataError::DataError;
};

using ProfitByKeyword = std::map<std::string, Money, std::less<>>;

/// Hindsight upper bound: keeps the subset of the required size with the
/// highest next-day reward under \p model. Throws MissingFutureProfit.
PruningDecision hindsight_oracle(const DecisionContext& ctx,
                                 const ProfitByKeyword& future_profit,
                                 std::size_t prune_count, const BudgetModel& model);

// -- agent -------------------------------------------------------------------

struct AgentSettings {
  int max_repairs = 3;
  /// k and filters for few-shot retrieval; before_day is always forced to the
  /// decision day.
  RetrievalOptions retrieval;
  /// Restricts retrieval to the deciding campaign's own history.
  bool campaign_scoped = false;
};

/// overview -> retrieve -> knowledge -> plan -> execute, repairing failed
/// plans up to max_repairs times. If every attempt fails the decision keeps
/// all keywords and carries no plan_text. Gateway errors propagate.
PruningDecision kp_agent_decide(const DecisionContext& ctx, const MemoryStore& memory,
                                ChatBackend& gateway, const AgentSettings& settings);

// -- dispatch ----------------------------------------------------------------

struct PolicyResources {
  const ExperimentLog* log = nullptr;
  BudgetModel budget_model;
  /// Target size for baselines and the oracle; 0 means n_min.
  std::size_t prune_to = 0;
  const MemoryStore* memory = nullptr;
  ChatBackend* gateway = nullptr;
  AgentSettings agent;
};

/// Number of keywords a baseline should drop to reach the target size.
std::size_t prune_count_for(const DecisionContext& ctx, std::size_t prune_to);

/// Common entry point used by the simulator.
PruningDecision decide(PolicyKind kind, const DecisionContext& ctx,
                       const PolicyResources& resources);

}  // namespace kwprune
