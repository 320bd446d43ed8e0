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
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "kwprune/budget.hpp"
#include "kwprune/campaign_data.hpp"
#include "kwprune/llm.hpp"
#include "kwprune/memory.hpp"
#include "kwprune/policy.hpp"

namespace kwprune {

struct SimulationConfig {
  std::size_t n_min = 5;
  int window = 7;
  /// Decisions are made on days decision_start..decision_end and scored on the
  /// following day.
  DayIndex decision_start = 7;
  DayIndex decision_end = 20;
  std::vector<PolicyKind> policies{PolicyKind::KpAgent};
  BudgetModel budget_model;
  std::uint64_t seed = 1;
  std::size_t k_shot = 3;
  /// When true each policy's retained set becomes the next day's keyword set.
  /// The hindsight oracle always chooses from the initial set.
  bool compounding = true;
  /// Target size for baselines and the oracle; 0 means n_min.
  std::size_t prune_to = 0;
  int max_repairs = 3;
  bool campaign_scoped_memory = false;
  std::size_t overview_char_cap = 0;
  /// Upper bound on concurrent campaign decisions within one day.
  std::size_t jobs = 1;

  /// Throws InvalidConfig when the config cannot run against \p log.
  void validate(const ExperimentLog& log) const;
};

struct TraceRow {
  std::string policy;
  std::string campaign_id;
  DayIndex decision_day = 0;
  /// The day the retained set is deployed and scored.
  DayIndex day = 0;
  /// |W| at decision time.
  std::size_t keyword_count = 0;
  std::size_t n_min = 0;
  PruningDecision decision;
  Money daily_budget;
  BudgetSplit split;
  Money reward;
  /// Prefix sum of rewards for this (policy, campaign).
  Money cumulative;
  /// Campaign had fewer than n_min initial keywords.
  bool pruning_disabled = false;
};

struct SimulationTrace {
  SimulationConfig config;
  /// Ordered by policy (config order), campaign id, day.
  std::vector<TraceRow> rows;
  std::vector<std::string> flagged_campaigns;
};

/// Raised when a policy or gateway fails mid-run. Carries the rows completed
/// before the failure and the original exception.
class SimulationAborted : public std::runtime_error {
 public:
  SimulationAborted(std::string what, SimulationTrace partial, std::exception_ptr cause);
  const SimulationTrace& partial() const { return partial_; }
  std::exception_ptr cause() const { return cause_; }

 private:
  SimulationTrace partial_;
  std::exception_ptr cause_;
};

/// Collaborators needed only by the agent policy.
struct SimulationEnv {
  /// Read during decisions, appended to at the end of each day.
  MemoryStore* memory = nullptr;
  ChatBackend* gateway = nullptr;
};

/// Keywords with any logged activity on or before \p day.
std::vector<std::string> initial_keywords(const ExperimentLog& log,
                                          std::string_view campaign_id, DayIndex day);

/// Replays every configured policy over the decision days. The log is never
/// modified.
SimulationTrace run_experiment(const ExperimentLog& log, const SimulationConfig& config,
                               SimulationEnv env = {});

}  // namespace kwprune
