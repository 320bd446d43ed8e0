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

#include "kwprune/memory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>

#include <json.hpp>

#include "kwprune/levenshtein.hpp"

namespace kwprune {

using nlohmann::json;

std::string format_fixed4(double value) {
  // nearbyint rounds half-to-even under the default rounding mode.
  double scaled = std::nearbyint(value * 10000.0);
  if (scaled == 0.0) scaled = 0.0;  // no "-0.0000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", scaled / 10000.0);
  return buf;
}

Overview render_overview(std::string_view campaign_id, DayIndex day,
                         std::span<const KeywordStats> stats) {
  if (stats.empty()) {
    throw std::invalid_argument("render_overview requires at least one keyword");
  }
  std::vector<const KeywordStats*> rows;
  rows.reserve(stats.size());
  for (const auto& s : stats) rows.push_back(&s);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    return a->keyword < b->keyword;
  });

  Overview o;
  o.campaign_id = std::string(campaign_id);
  o.day = day;
  std::string& t = o.text;
  t += "campaign=" + o.campaign_id + " day=" + std::to_string(day) +
       " keywords=" + std::to_string(rows.size()) +
       " window=" + std::to_string(rows.front()->window_days) + "\n";
  // Column names appear once so retrieval distance is spent on the numbers.
  t += "keyword | mean_impressions | mean_clicks | mean_conversions | ctr | cvr | "
       "impression_slope | total_profit | total_cost\n";
  for (const auto* s : rows) {
    t += s->keyword;
    for (double v : {s->mean_impressions, s->mean_clicks, s->mean_conversions, s->ctr, s->cvr,
                     s->impression_slope, s->total_profit.to_double(),
                     s->total_cost.to_double()}) {
      t += " | " + format_fixed4(v);
    }
    t += "\n";
  }
  return o;
}

CorruptStore::CorruptStore(std::size_t byte_offset, std::string why)
    : std::runtime_error("corrupt memory store at byte " +
                         std::to_string(byte_offset) + ": " + why),
      offset(byte_offset),
      reason(std::move(why)) {}

void MemoryStore::append(MemoryEntry entry) {
  if (!entries_.empty() && !(entries_.back().inserted_at < entry.inserted_at)) {
    throw NonMonotonicInsert(
        "memory insert (" + std::to_string(entry.inserted_at.day) + ", " +
        std::to_string(entry.inserted_at.seq) + ") is not after (" +
        std::to_string(entries_.back().inserted_at.day) + ", " +
        std::to_string(entries_.back().inserted_at.seq) + ")");
  }
  if (entry.overview.day != entry.inserted_at.day) {
    throw std::invalid_argument("memory entry overview day differs from its insertion day");
  }
  decoded_.push_back(decode_utf8(entry.overview.text));
  entries_.push_back(std::move(entry));
}

InsertionStamp MemoryStore::next_stamp(DayIndex day) const {
  std::uint64_t seq = entries_.empty() ? 0 : entries_.back().inserted_at.seq + 1;
  return InsertionStamp{day, seq};
}

std::vector<RetrievedExample> retrieve_topk(const MemoryStore& store,
                                            const Overview& query,
                                            const RetrievalOptions& options) {
  auto capped = [&](std::u32string_view s) {
    if (options.char_cap > 0 && s.size() > options.char_cap) s = s.substr(0, options.char_cap);
    return s;
  };
  const std::u32string query_text = decode_utf8(query.text);
  const LevenshteinPattern pattern(capped(query_text));

  // Same-campaign entries tend to be the closest, so scanning them first (most
  // recent first) tightens the cutoff early. The result does not depend on
  // the scan order.
  const auto& entries = store.entries();
  std::vector<std::size_t> order;
  for (std::size_t i = entries.size(); i-- > 0;) {
    const auto& e = entries[i];
    if (options.before_day && e.inserted_at.day >= *options.before_day) continue;
    if (options.campaign_id && e.overview.campaign_id != *options.campaign_id) continue;
    order.push_back(i);
  }
  std::stable_partition(order.begin(), order.end(), [&](std::size_t i) {
    return entries[i].overview.campaign_id == query.campaign_id;
  });

  struct Candidate {
    std::size_t index;
    std::size_t distance;
  };
  // Entries are stored in insertion order, so a larger index is more recent.
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index > b.index;
  };
  std::vector<Candidate> best;
  if (options.k > 0) {
    for (std::size_t i : order) {
      const std::u32string_view text = capped(store.decoded_overview(i));
      std::optional<std::size_t> d;
      if (best.size() < options.k) {
        d = pattern.distance(text);
      } else {
        const Candidate& worst = best.back();
        if (i > worst.index) {
          d = pattern.distance_within(text, worst.distance);
        } else if (worst.distance > 0) {
          d = pattern.distance_within(text, worst.distance - 1);
        }
      }
      if (!d) continue;
      Candidate cand{i, *d};
      best.insert(std::upper_bound(best.begin(), best.end(), cand, better), cand);
      if (best.size() > options.k) best.pop_back();
    }
  }
  std::vector<RetrievedExample> out;
  out.reserve(best.size());
  for (const auto& c : best) {
    out.push_back({entries[c.index], -static_cast<std::int64_t>(c.distance)});
  }
  return out;
}

void persist(const MemoryStore& store, std::ostream& sink) {
  for (const auto& e : store.entries()) {
    json j = {{"day", e.inserted_at.day},
              {"seq", e.inserted_at.seq},
              {"campaign_id", e.overview.campaign_id},
              {"overview", e.overview.text},
              {"knowledge", e.knowledge},
              {"plan", e.plan_text},
              {"reflection", e.reflection},
              {"reward", e.reward.to_string()}};
    sink << j.dump() << '\n';
  }
}

MemoryStore load_store(std::istream& source) {
  std::string data{std::istreambuf_iterator<char>(source),
                   std::istreambuf_iterator<char>()};
  MemoryStore store;
  std::size_t pos = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    if (nl == std::string::npos) {
      throw CorruptStore(pos, "truncated record (missing newline)");
    }
    std::string_view line(data.data() + pos, nl - pos);
    if (!line.empty()) {
      try {
        json j = json::parse(line);
        MemoryEntry e;
        e.inserted_at.day = j.at("day").get<DayIndex>();
        e.inserted_at.seq = j.at("seq").get<std::uint64_t>();
        e.overview.campaign_id = j.at("campaign_id").get<std::string>();
        e.overview.text = j.at("overview").get<std::string>();
        e.overview.day = e.inserted_at.day;
        e.knowledge = j.at("knowledge").get<std::string>();
        e.plan_text = j.at("plan").get<std::string>();
        e.reflection = j.at("reflection").get<std::string>();
        e.reward = Money::parse(j.at("reward").get<std::string>());
        store.append(std::move(e));
      } catch (const CorruptStore&) {
        throw;
      } catch (const std::exception& ex) {
        throw CorruptStore(pos, ex.what());
      }
    }
    pos = nl + 1;
  }
  return store;
}

}  // namespace kwprune
