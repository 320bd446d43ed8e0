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

// Small builders shared by the unit tests and the acceptance runner.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kwprune/campaign_data.hpp"
#include "kwprune/toolset.hpp"

namespace kwprune::testing {

inline KeywordDayRecord rec(std::string campaign, std::string keyword, DayIndex day,
                            std::int64_t impressions, std::int64_t clicks,
                            std::int64_t conversions, std::int64_t cost_cents,
                            std::int64_t profit_cents) {
  return KeywordDayRecord{std::move(campaign), std::move(keyword), day,
                          impressions,         clicks,             conversions,
                          Money::from_cents(cost_cents), Money::from_cents(profit_cents)};
}

inline KeywordStats stats(std::string keyword) {
  KeywordStats s;
  s.keyword = std::move(keyword);
  return s;
}

/// Table whose keywords carry the given ctr values, in keyword order.
inline StatsTable ctr_table(const std::vector<std::pair<std::string, double>>& ctrs) {
  std::vector<KeywordStats> rows;
  for (const auto& [kw, ctr] : ctrs) {
    auto s = stats(kw);
    s.ctr = ctr;
    rows.push_back(s);
  }
  return StatsTable::from_stats(std::move(rows));
}

inline std::vector<std::string> keywords_of(const StatsTable& t) { return t.keywords(); }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("kwprune_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(++counter));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace kwprune::testing
