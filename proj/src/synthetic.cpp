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

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace kwprune {

namespace {

constexpr std::array<const char*, 32> kTerms = {
    "cold medicine",     "ibuprofen",        "vitamin c",
    "cough syrup",       "allergy relief",   "antacid",
    "eye drops",         "band aid",         "thermometer",
    "face mask",         "probiotics",       "calcium tablets",
    "sleep aid",         "pain relief gel",  "throat lozenges",
    "hand sanitizer",    "blood pressure",   "glucose meter",
    "fish oil",          "multivitamin",     "nasal spray",
    "burn ointment",     "antiseptic",       "zinc supplement",
    "感冒药",            "布洛芬",           "维生素",
    "口罩",              "创可贴",           "退烧贴",
    "delivery pharmacy", "24h drugstore"};

struct KeywordProfile {
  std::string name;
  bool head = false;
  double base_impressions = 0;
  double trend = 0;
  double ctr = 0;
  double cvr = 0;
  double cpc = 0;
};

// Splits `total` cents across weights by largest remainder; ties go to the
// lower index so the split is deterministic.
std::vector<std::int64_t> apportion(std::int64_t total,
                                    const std::vector<double>& weights) {
  std::vector<std::int64_t> out(weights.size(), 0);
  if (weights.empty()) return out;
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::pair<double, std::size_t>> rem;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double exact = sum > 0 ? static_cast<double>(total) * weights[i] / sum
                           : static_cast<double>(total) / static_cast<double>(weights.size());
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += out[i];
    rem.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % rem.size(), ++assigned) {
    out[rem[k].second] += 1;
  }
  return out;
}

}  // namespace

std::size_t skew_head_count(double fraction, std::size_t keyword_count) {
  auto n = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(keyword_count)));
  return std::clamp<std::size_t>(n, 1, keyword_count);
}

ExperimentLog generate_synthetic_log(const SyntheticConfig& config) {
  if (config.campaigns < 1 || config.keywords_per_campaign < 1 || config.days < 1) {
    throw InvalidConfig("campaign, keyword and day counts must be positive");
  }
  if (config.keyword_jitter < 0) {
    throw InvalidConfig("keyword_jitter must be non-negative");
  }
  if (!(config.skew_fraction > 0.0 && config.skew_fraction < 1.0)) {
    throw InvalidConfig("skew_fraction must lie in (0, 1)");
  }
  if (!(config.skew_share > 0.0 && config.skew_share <= 1.0)) {
    throw InvalidConfig("skew_share must lie in (0, 1]");
  }
  if (!(config.noise >= 0.0) || !std::isfinite(config.noise)) {
    throw InvalidConfig("noise must be a non-negative finite number");
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  std::vector<KeywordDayRecord> records;
  const int width = config.campaigns >= 100 ? 3 : 2;
  for (int c = 1; c <= config.campaigns; ++c) {
    std::string cid = std::to_string(c);
    cid = "c" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(cid.size()))), '0') + cid;

    int k = config.keywords_per_campaign;
    if (config.keyword_jitter > 0) {
      std::uniform_int_distribution<int> jitter(-config.keyword_jitter,
                                                config.keyword_jitter);
      k = std::max(1, k + jitter(rng));
    }
    std::vector<std::size_t> term_order(kTerms.size());
    std::iota(term_order.begin(), term_order.end(), 0);
    std::shuffle(term_order.begin(), term_order.end(), rng);

    const auto kw_count = static_cast<std::size_t>(k);
    const std::size_t head = skew_head_count(config.skew_fraction, kw_count);
    std::vector<KeywordProfile> profiles(kw_count);
    for (std::size_t j = 0; j < kw_count; ++j) {
      auto& p = profiles[j];
      p.name = kTerms[term_order[j % kTerms.size()]];
      if (j >= kTerms.size()) p.name += " " + std::to_string(j / kTerms.size() + 1);
      p.head = j < head;
      p.base_impressions = std::exp(std::log(800.0) + 0.8 * gauss(rng));
      p.trend = 0.04 * gauss(rng);
      p.ctr = p.head ? uniform(0.05, 0.12) : uniform(0.01, 0.09);
      p.cvr = p.head ? uniform(0.08, 0.20) : uniform(0.01, 0.12);
      p.cpc = uniform(0.3, 1.5);
    }

    const double mid = (config.days - 1) / 2.0;
    std::vector<KeywordDayRecord> day_rows(kw_count);
    for (int d = 1; d <= config.days; ++d) {
      std::vector<double> head_w, tail_w;
      std::int64_t pool = 0;
      for (std::size_t j = 0; j < kw_count; ++j) {
        const auto& p = profiles[j];
        auto& r = day_rows[j];
        r.campaign_id = cid;
        r.keyword = p.name;
        r.day = d;
        double level = std::max(0.05, 1.0 + p.trend * (d - 1 - mid));
        double impr = p.base_impressions * level * std::exp(config.noise * gauss(rng));
        r.impressions = std::llround(impr);
        double ctr = std::clamp(p.ctr * std::exp(config.noise * gauss(rng)), 0.0, 1.0);
        r.clicks = std::binomial_distribution<std::int64_t>(r.impressions, ctr)(rng);
        r.conversions = std::binomial_distribution<std::int64_t>(r.clicks, p.cvr)(rng);
        r.cost = Money::from_cents(std::llround(static_cast<double>(r.clicks) * p.cpc * 100.0));
        pool += r.conversions * 2000;  // 20.00 gross margin per conversion
        double weight = static_cast<double>(r.conversions) + 1.0;
        (p.head ? head_w : tail_w).push_back(weight);
      }
      pool = std::max<std::int64_t>(pool, 100);
      std::int64_t head_pool = tail_w.empty()
          ? pool
          : static_cast<std::int64_t>(std::ceil(config.skew_share * static_cast<double>(pool)));
      std::int64_t tail_pool = pool - head_pool;
      auto head_split = apportion(head_pool, head_w);
      auto tail_split = apportion(tail_pool, tail_w);
      if (tail_split.size() >= 2 && config.noise > 0) {
        // Zero-sum perturbation keeps the tail total fixed.
        const double scale = config.noise * 2.0 *
            static_cast<double>(std::max<std::int64_t>(tail_pool, 100)) /
            static_cast<double>(tail_split.size());
        std::int64_t drift = 0;
        for (std::size_t t = 1; t < tail_split.size(); ++t) {
          auto e = std::llround(scale * gauss(rng));
          tail_split[t] += e;
          drift += e;
        }
        tail_split[0] -= drift;
      }
      std::size_t hi = 0, ti = 0;
      for (std::size_t j = 0; j < kw_count; ++j) {
        auto& r = day_rows[j];
        std::int64_t gross = profiles[j].head ? head_split[hi++] : tail_split[ti++];
        r.profit = Money::from_cents(gross);
        records.push_back(r);
      }
    }
  }
  return ExperimentLog::build(std::move(records));
}

}  // namespace kwprune
