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

#include "kwprune/config.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

namespace kwprune {
namespace {

TEST(Config, LoadsSectionedFile) {
  testing::TempDir dir("config");
  testing::write_file(dir.file("run.ini"),
                      "# experiment\n[data]\nlog = logs/a.csv\n\n[simulation]\nn_min = 7\n"
                      "policies = ctr_rank, oracle\nresponse = concave\nalpha = 0.25\n"
                      "compounding = false\n[policy]\nprune_to = 6\n[memory]\nk_shot = 5\n"
                      "same_campaign_only = true\n[llm]\nbackend = live\n"
                      "endpoint = http://localhost:8080\ntimeout_secs = 12.5\n"
                      "[compare]\nsweep = 5,7,9\n[synthetic]\ncampaigns = 12\n");
  RunConfig c;
  load_config_file(c, dir.file("run.ini"));
  EXPECT_EQ(c.log_path, "logs/a.csv");
  EXPECT_EQ(c.simulation.n_min, 7u);
  EXPECT_EQ(c.simulation.policies, (std::vector<PolicyKind>{PolicyKind::CtrRank, PolicyKind::Oracle}));
  EXPECT_EQ(c.simulation.budget_model.response, BudgetModel::Response::Concave);
  EXPECT_DOUBLE_EQ(c.simulation.budget_model.alpha, 0.25);
  EXPECT_FALSE(c.simulation.compounding);
  EXPECT_EQ(c.simulation.prune_to, 6u);
  EXPECT_EQ(c.simulation.k_shot, 5u);
  EXPECT_TRUE(c.simulation.campaign_scoped_memory);
  EXPECT_EQ(c.backend, "live");
  EXPECT_DOUBLE_EQ(c.live.timeout_secs, 12.5);
  EXPECT_EQ(c.sweep, (std::vector<std::size_t>{5, 7, 9}));
  EXPECT_EQ(c.synthetic.campaigns, 12);
  EXPECT_NO_THROW(validate_run_config(c));
}

TEST(Config, ErrorsNameFileAndKey) {
  testing::TempDir dir("config");
  testing::write_file(dir.file("bad.ini"), "[simulation]\nn_min = zero\n");
  RunConfig c;
  try {
    load_config_file(c, dir.file("bad.ini"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.source(), dir.file("bad.ini"));
    EXPECT_EQ(e.key(), "simulation.n_min");
  }
  testing::write_file(dir.file("unknown.ini"), "[simulation]\nspeed = 3\n");
  EXPECT_THROW(load_config_file(c, dir.file("unknown.ini")), ConfigError);
  testing::write_file(dir.file("loose.ini"), "n_min = 3\n");
  EXPECT_THROW(load_config_file(c, dir.file("loose.ini")), ConfigError);
}

TEST(Config, ValueValidation) {
  RunConfig c;
  auto bad = [&](const char* key, const char* value) {
    EXPECT_THROW(set_config_value(c, key, value, "test"), ConfigError) << key << "=" << value;
  };
  bad("simulation.n_min", "0");
  bad("simulation.n_min", "-2");
  bad("simulation.policies", "ctr_rank,banana");
  bad("simulation.response", "cubic");
  bad("simulation.alpha", "1.5");
  bad("compare.sweep", "9,7,5");
  bad("compare.sweep", "5,5");
  bad("memory.same_campaign_only", "maybe");
  bad("llm.backend", "carrier-pigeon");
  bad("synthetic.skew_fraction", "2");
  set_config_value(c, "simulation.seed", "42", "test");
  EXPECT_EQ(c.simulation.seed, 42u);
  EXPECT_EQ(c.synthetic.seed, 42u);
}

TEST(Config, EveryKeyIsSettable) {
  const auto& keys = config_keys();
  EXPECT_NE(std::find(keys.begin(), keys.end(), "simulation.n_min"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "llm.timeout_secs"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "memory.same_campaign_only"), keys.end());
  EXPECT_NE(std::find(keys.begin(), keys.end(), "policy.prune_to"), keys.end());
}

TEST(Config, LiveBackendNeedsEndpoint) {
  RunConfig c;
  c.backend = "live";
  EXPECT_THROW(validate_run_config(c), ConfigError);
}

}  // namespace
}  // namespace kwprune
