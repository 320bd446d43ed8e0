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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwprune/campaign_data.hpp"
#include "kwprune/money.hpp"

namespace kwprune {

/// How logged profit responds when pruning raises each keyword's budget
/// share by the multiplier s = original_count / retained_count.
struct BudgetModel {
  enum class Response { Identity, Linear, Concave };
  Response response = Response::Linear;
  /// Exponent of the concave response, in (0, 1].
  double alpha = 0.5;

  /// Throws std::invalid_argument for alpha outside (0, 1] on Concave.
  void validate() const;
  std::string name() const;
  static std::optional<Response> parse(std::string_view name);

  friend bool operator==(const BudgetModel&, const BudgetModel&) = default;
};

struct BudgetSplit {
  /// One share per retained keyword, in keyword-ascending order. The first
  /// keyword absorbs the rounding remainder so the shares sum to the budget.
  std::vector<Money> shares;
  std::size_t original_count = 0;
  std::size_t retained_count = 0;

  double multiplier() const {
    return static_cast<double>(original_count) / static_cast<double>(retained_count);
  }
};

/// Even split of the daily budget. retained_count must be at least 1.
BudgetSplit budget_shares(Money budget, std::size_t retained_count,
                          std::size_t original_count);

/// Scales a profit sum under the response model with s = original/retained.
Money apply_response(Money profit_sum, const BudgetModel& model,
                     std::size_t original_count, std::size_t retained_count);

class DayOutOfRange : public DataError {
 public:
  using DataError::DataError;
};

/// Reward of deploying \p retained on \p day: the logged profit of those
/// keywords on that day, scaled by the response model. Keywords without a
/// record that day contribute zero. Throws DayOutOfRange.
Money compute_reward(const ExperimentLog& log, std::string_view campaign_id,
                     DayIndex day, std::span<const std::string> retained,
                     const BudgetModel& model, std::size_t original_count);

}  // namespace kwprune
