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

#include "kwprune/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace kwprune {
namespace {

TEST(Synthetic, SameSeedSameBytes) {
  SyntheticConfig cfg;
  cfg.seed = 1;
  std::ostringstream a, b;
  write_log(a, generate_synthetic_log(cfg));
  write_log(b, generate_synthetic_log(cfg));
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 2;
  std::ostringstream c;
  write_log(c, generate_synthetic_log(cfg));
  EXPECT_NE(a.str(), c.str());
}

TEST(Synthetic, HeadKeywordsCarryConfiguredShare) {
  SyntheticConfig cfg;
  cfg.keywords_per_campaign = 10;
  cfg.skew_fraction = 0.2;
  cfg.skew_share = 0.8;
  auto log = generate_synthetic_log(cfg);
  for (const auto& c : log.campaigns()) {
    std::map<std::string, std::int64_t> profit;
    std::int64_t total = 0;
    for (const auto& r : log.records()) {
      if (r.campaign_id != c.id) continue;
      profit[r.keyword] += r.profit.cents();
      total += r.profit.cents();
    }
    std::vector<std::int64_t> sorted;
    for (const auto& [kw, p] : profit) sorted.push_back(p);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::int64_t head = 0;
    for (std::size_t i = 0; i < skew_head_count(0.2, sorted.size()); ++i) head += sorted[i];
    ASSERT_GT(total, 0) << c.id;
    EXPECT_GE(static_cast<double>(head), 0.8 * static_cast<double>(total)) << c.id;
  }
}

TEST(Synthetic, RecordCountIsKeywordsTimesDays) {
  SyntheticConfig cfg;
  cfg.keyword_jitter = 2;
  auto log = generate_synthetic_log(cfg);
  std::size_t keywords = 0;
  for (const auto& c : log.campaigns()) keywords += c.keywords.size();
  EXPECT_EQ(log.campaigns().size(), 45u);
  EXPECT_EQ(log.records().size(), keywords * 21);
  EXPECT_EQ(log.horizon(), (DayRange{1, 21}));
}

TEST(Synthetic, RejectsBadConfig) {
  SyntheticConfig cfg;
  cfg.skew_fraction = 1.0;
  EXPECT_THROW(generate_synthetic_log(cfg), InvalidConfig);
  cfg = {};
  cfg.campaigns = 0;
  EXPECT_THROW(generate_synthetic_log(cfg), InvalidConfig);
}

}  // namespace
}  // namespace kwprune
