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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kwprune/campaign_data.hpp"
#include "kwprune/money.hpp"

namespace kwprune {

/// Deterministic text summary of one campaign on one day; the retrieval key
/// of the memory store.
struct Overview {
  std::string text;
  std::string campaign_id;
  DayIndex day = 0;

  friend bool operator==(const Overview&, const Overview&) = default;
};

/// Formats with exactly four fractional digits, rounding half-to-even.
std::string format_fixed4(double value);

/// Renders the overview: a header line, then one line per keyword in
/// keyword-ascending order with every statistic at four fractional digits.
/// Throws std::invalid_argument when stats is empty.
Overview render_overview(std::string_view campaign_id, DayIndex day,
                         std::span<const KeywordStats> stats);

struct InsertionStamp {
  DayIndex day = 0;
  std::uint64_t seq = 0;

  friend auto operator<=>(const InsertionStamp&, const InsertionStamp&) = default;
};

struct MemoryEntry {
  Overview overview;
  std::string knowledge;
  std::string plan_text;
  std::string reflection;
  Money reward;
  InsertionStamp inserted_at;

  friend bool operator==(const MemoryEntry&, const MemoryEntry&) = default;
};

class NonMonotonicInsert : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptStore : public std::runtime_error {
 public:
  CorruptStore(std::size_t byte_offset, std::string why);
  std::size_t offset;
  std::string reason;
};

/// Append-only long-term memory; iteration order is insertion order.
class MemoryStore {
 public:
  /// Throws NonMonotonicInsert unless entry.inserted_at is greater than every
  /// stored stamp. The overview must describe the insertion day.
  void append(MemoryEntry entry);

  /// Stamp for the next append on \p day: (day, last seq + 1).
  InsertionStamp next_stamp(DayIndex day) const;

  const std::vector<MemoryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Overview text of entry \p i as unicode scalars, decoded once on append.
  std::u32string_view decoded_overview(std::size_t i) const { return decoded_[i]; }

  friend bool operator==(const MemoryStore& a, const MemoryStore& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<MemoryEntry> entries_;
  std::vector<std::u32string> decoded_;
};

struct RetrievalOptions {
  std::size_t k = 3;
  /// Only entries inserted strictly before this day are visible.
  std::optional<DayIndex> before_day;
  /// Restricts retrieval to one campaign's history.
  std::optional<std::string> campaign_id;
  /// Compares only the first N characters of each overview; 0 = no cap.
  std::size_t char_cap = 0;
};

struct RetrievedExample {
  MemoryEntry entry;
  /// Negative Levenshtein distance to the query overview.
  std::int64_t similarity = 0;
};

/// The min(k, |visible|) entries with the highest similarity; ties go to the
/// most recently inserted. Ordered by similarity, then recency, descending.
std::vector<RetrievedExample> retrieve_topk(const MemoryStore& store,
                                            const Overview& query,
                                            const RetrievalOptions& options);

/// Newline-delimited JSON, one object per entry with the fields
/// day, seq, campaign_id, overview, knowledge, plan, reflection, reward.
void persist(const MemoryStore& store, std::ostream& sink);

/// Inverse of persist. Throws CorruptStore with the byte offset of the bad
/// record.
MemoryStore load_store(std::istream& source);

}  // namespace kwprune
