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

#include "kwprune/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "kwprune/prompts.hpp"

namespace kwprune {

void SimulationConfig::validate(const ExperimentLog& log) const {
  if (n_min == 0) throw InvalidConfig("n_min must be positive");
  if (window <= 0) throw InvalidConfig("window must be positive");
  if (k_shot == 0) throw InvalidConfig("k_shot must be positive");
  if (max_repairs < 0) throw InvalidConfig("max_repairs must be non-negative");
  if (jobs == 0) throw InvalidConfig("jobs must be positive");
  if (policies.empty()) throw InvalidConfig("no policies configured");
  if (decision_start < window) {
    throw InvalidConfig("decision_start must be at least the window length");
  }
  if (decision_end < decision_start) throw InvalidConfig("empty decision-day range");
  try {
    budget_model.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(e.what());
  }
  if (log.empty()) throw InvalidConfig("the log has no records");
  const DayRange h = log.horizon();
  if (decision_start - window + 1 < h.first) {
    throw InvalidConfig("the first decision window starts before the log's first day " +
                        std::to_string(h.first));
  }
  if (decision_end >= h.last) {
    throw InvalidConfig("decision_end must be before the log's last day " +
                        std::to_string(h.last));
  }
}

SimulationAborted::SimulationAborted(std::string what, SimulationTrace partial,
                                     std::exception_ptr cause)
    : std::runtime_error(std::move(what)),
      partial_(std::move(partial)),
      cause_(std::move(cause)) {}

std::vector<std::string> initial_keywords(const ExperimentLog& log,
                                          std::string_view campaign_id, DayIndex day) {
  std::vector<std::string> out;
  for (const auto& kw : log.campaign(campaign_id).keywords) {
    for (const auto& r : log.series(campaign_id, kw)) {
      if (r.day > day) break;
      if (r.impressions > 0 || r.clicks > 0 || r.conversions > 0 || r.cost.cents() != 0 ||
          r.profit.cents() != 0) {
        out.push_back(kw);
        break;
      }
    }
  }
  return out;
}

namespace {

struct CampaignState {
  const Campaign* campaign = nullptr;
  std::vector<std::string> initial;
  std::vector<std::string> current;
  bool pruning_disabled = false;
  Money cumulative;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The exception of the
// lowest failing index is rethrown so failures are reported deterministically.
template <typename Fn>
void run_indexed(std::size_t n, std::size_t jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min(jobs, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class PolicyRun {
 public:
  PolicyRun(const ExperimentLog& log, const SimulationConfig& config, SimulationEnv env,
            PolicyKind kind, std::vector<TraceRow>& rows)
      : log_(log), config_(config), env_(env), kind_(kind), rows_(rows) {
    for (const auto& c : log.campaigns()) {
      CampaignState s;
      s.campaign = &c;
      s.initial = initial_keywords(log, c.id, config.decision_start);
      s.current = s.initial;
      s.pruning_disabled = s.initial.size() < config.n_min;
      states_.push_back(std::move(s));
    }
    resources_.log = &log;
    resources_.budget_model = config.budget_model;
    resources_.prune_to = config.prune_to;
    resources_.memory = env.memory;
    resources_.gateway = env.gateway;
    resources_.agent.max_repairs = config.max_repairs;
    resources_.agent.retrieval.k = config.k_shot;
    resources_.agent.retrieval.char_cap = config.overview_char_cap;
    resources_.agent.campaign_scoped = config.campaign_scoped_memory;
    if (kind == PolicyKind::KpAgent && (!env.memory || !env.gateway)) {
      throw std::invalid_argument("kp_agent needs a memory store and a gateway");
    }
  }

  const std::vector<CampaignState>& states() const { return states_; }

  void run_day(DayIndex t) {
    const std::size_t n = states_.size();
    std::vector<std::optional<DecisionContext>> contexts(n);
    std::vector<PruningDecision> decisions(n);

    const bool serial =
        kind_ == PolicyKind::KpAgent && env_.gateway && env_.gateway->order_sensitive();
    run_indexed(n, serial ? 1 : config_.jobs, [&](std::size_t i) {
      const CampaignState& s = states_[i];
      Campaign c = *s.campaign;
      const bool from_initial = kind_ == PolicyKind::Oracle || !config_.compounding;
      c.keywords = from_initial ? s.initial : s.current;
      if (c.keywords.empty()) {
        decisions[i].policy_name = std::string(policy_name(kind_));
        return;
      }
      contexts[i] = make_context(log_, std::move(c), t, config_.window, config_.n_min);
      if (s.pruning_disabled) {
        decisions[i] = keep_all(*contexts[i]);
        decisions[i].policy_name = std::string(policy_name(kind_));
      } else {
        decisions[i] = decide(kind_, *contexts[i], resources_);
      }
    });

    // Rewards, reflections and memory appends in campaign order.
    for (std::size_t i = 0; i < n; ++i) {
      CampaignState& s = states_[i];
      TraceRow row;
      row.policy = std::string(policy_name(kind_));
      row.campaign_id = s.campaign->id;
      row.decision_day = t;
      row.day = t + 1;
      row.keyword_count = contexts[i] ? contexts[i]->campaign.keywords.size() : 0;
      row.n_min = config_.n_min;
      row.daily_budget = s.campaign->daily_budget;
      row.pruning_disabled = s.pruning_disabled;
      row.decision = std::move(decisions[i]);
      const auto& retained = row.decision.retained;
      if (!retained.empty()) {
        row.split = budget_shares(row.daily_budget, retained.size(), s.initial.size());
        row.reward = compute_reward(log_, s.campaign->id, t + 1, retained,
                                    config_.budget_model, s.initial.size());
      }
      s.cumulative = s.cumulative + row.reward;
      row.cumulative = s.cumulative;
      s.current = retained;

      if (kind_ == PolicyKind::KpAgent && !s.pruning_disabled && row.decision.overview) {
        const Overview& ov = *row.decision.overview;
        const std::string plan = row.decision.plan_text.value_or("");
        MemoryEntry entry;
        entry.overview = ov;
        entry.knowledge = row.decision.knowledge.value_or("");
        entry.plan_text = plan;
        entry.reward = row.reward;
        entry.reflection =
            env_.gateway->complete(build_reflection_prompt(ov, plan, row.reward)).text;
        entry.inserted_at = env_.memory->next_stamp(t);
        env_.memory->append(std::move(entry));
      }
      rows_.push_back(std::move(row));
    }
  }

 private:
  const ExperimentLog& log_;
  const SimulationConfig& config_;
  SimulationEnv env_;
  PolicyKind kind_;
  std::vector<TraceRow>& rows_;
  std::vector<CampaignState> states_;
  PolicyResources resources_;
};

void sort_rows(std::vector<TraceRow>& rows, std::size_t from) {
  std::stable_sort(rows.begin() + static_cast<std::ptrdiff_t>(from), rows.end(),
                   [](const TraceRow& a, const TraceRow& b) {
                     if (a.campaign_id != b.campaign_id) return a.campaign_id < b.campaign_id;
                     return a.day < b.day;
                   });
}

}  // namespace

SimulationTrace run_experiment(const ExperimentLog& log, const SimulationConfig& config,
                               SimulationEnv env) {
  config.validate(log);
  SimulationTrace trace;
  trace.config = config;

  for (PolicyKind kind : config.policies) {
    const std::size_t first_row = trace.rows.size();
    DayIndex t = config.decision_start;
    try {
      PolicyRun run(log, config, env, kind, trace.rows);
      if (trace.flagged_campaigns.empty()) {
        for (const auto& s : run.states()) {
          if (s.pruning_disabled) trace.flagged_campaigns.push_back(s.campaign->id);
        }
      }
      for (; t <= config.decision_end; ++t) run.run_day(t);
    } catch (...) {
      sort_rows(trace.rows, first_row);
      std::string why = "unknown error";
      try {
        throw;
      } catch (const std::exception& e) {
        why = e.what();
      } catch (...) {
      }
      throw SimulationAborted("policy " + std::string(policy_name(kind)) +
                                  " failed on day " + std::to_string(t) + ": " + why,
                              std::move(trace), std::current_exception());
    }
    sort_rows(trace.rows, first_row);
  }
  return trace;
}

}  // namespace kwprune
