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

#include "kwprune/campaign_data.hpp"

namespace kwprune {

struct SyntheticConfig {
  int campaigns = 45;
  int keywords_per_campaign = 6;
  /// Each campaign draws its keyword count uniformly from
  /// keywords_per_campaign +/- keyword_jitter (never below 1).
  int keyword_jitter = 0;
  int days = 21;
  /// Fraction of each campaign's keywords that form the profitable head.
  double skew_fraction = 0.2;
  /// Share of campaign profit the head carries (at least).
  double skew_share = 0.8;
  /// Log-normal noise scale applied to daily traffic and tail profit.
  double noise = 0.2;
  std::uint64_t seed = 1;
};

/// Number of head keywords for a campaign of `keyword_count` keywords:
/// round(fraction * count), at least 1.
std::size_t skew_head_count(double fraction, std::size_t keyword_count);

/// Deterministic synthetic log. Per campaign and per day, the head keywords
/// jointly receive at least skew_share of the campaign's profit; tail
/// keywords share the rest with zero-sum noise, so individual tail days may
/// be negative. Throws InvalidConfig.
ExperimentLog generate_synthetic_log(const SyntheticConfig& config);

}  // namespace kwprune
