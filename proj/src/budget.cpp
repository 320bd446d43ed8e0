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

#include "kwprune/budget.hpp"

#include <cmath>
#include <stdexcept>

namespace kwprune {

void BudgetModel::validate() const {
  if (response == Response::Concave && !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("concave response needs alpha in (0, 1], got " +
                                std::to_string(alpha));
  }
}

std::string BudgetModel::name() const {
  switch (response) {
    case Response::Identity: return "identity";
    case Response::Linear: return "linear";
    case Response::Concave: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "concave(alpha=%g)", alpha);
      return buf;
    }
  }
  return "?";
}

std::optional<BudgetModel::Response> BudgetModel::parse(std::string_view name) {
  if (name == "identity") return Response::Identity;
  if (name == "linear") return Response::Linear;
  if (name == "concave") return Response::Concave;
  return std::nullopt;
}

BudgetSplit budget_shares(Money budget, std::size_t retained_count,
                          std::size_t original_count) {
  if (retained_count == 0) {
    throw std::invalid_argument("budget_shares needs at least one retained keyword");
  }
  const auto n = static_cast<std::int64_t>(retained_count);
  const std::int64_t base = budget.cents() / n;
  const std::int64_t remainder = budget.cents() - base * n;
  BudgetSplit split;
  split.original_count = original_count;
  split.retained_count = retained_count;
  split.shares.assign(retained_count, Money::from_cents(base));
  split.shares.front() += Money::from_cents(remainder);
  return split;
}

Money apply_response(Money profit_sum, const BudgetModel& model,
                     std::size_t original_count, std::size_t retained_count) {
  if (retained_count == 0) {
    throw std::invalid_argument("response model needs at least one retained keyword");
  }
  switch (model.response) {
    case BudgetModel::Response::Identity:
      return profit_sum;
    case BudgetModel::Response::Linear:
      return profit_sum.scaled(static_cast<std::int64_t>(original_count),
                               static_cast<std::int64_t>(retained_count));
    case BudgetModel::Response::Concave: {
      double s = static_cast<double>(original_count) / static_cast<double>(retained_count);
      return profit_sum.scaled(std::pow(s, model.alpha));
    }
  }
  return profit_sum;
}

Money compute_reward(const ExperimentLog& log, std::string_view campaign_id,
                     DayIndex day, std::span<const std::string> retained,
                     const BudgetModel& model, std::size_t original_count) {
  const DayRange h = log.horizon();
  if (day < h.first || day > h.last) {
    throw DayOutOfRange("reward day " + std::to_string(day) + " outside log horizon [" +
                        std::to_string(h.first) + ", " + std::to_string(h.last) + "]");
  }
  Money sum;
  for (const auto& kw : retained) {
    if (const auto* r = log.find(campaign_id, kw, day)) sum += r->profit;
  }
  return apply_response(sum, model, original_count, retained.size());
}

}  // namespace kwprune
