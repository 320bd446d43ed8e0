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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kwprune {

/// Decodes UTF-8 into unicode scalar values. Each byte of an invalid
/// sequence decodes to U+FFFD.
std::u32string decode_utf8(std::string_view text);

/// Unit-cost edit distance (insert, delete, substitute) over unicode scalar
/// values.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// The distance if it is at most \p max_distance, otherwise nullopt. Cheaper
/// than levenshtein() when the bound is tight.
std::optional<std::size_t> levenshtein_within(std::u32string_view a, std::u32string_view b,
                                              std::size_t max_distance);

/// A string preprocessed for repeated distance queries against many texts.
class LevenshteinPattern {
 public:
  explicit LevenshteinPattern(std::u32string_view pattern);

  std::size_t size() const { return length_; }
  std::size_t distance(std::u32string_view text) const;
  std::optional<std::size_t> distance_within(std::u32string_view text,
                                             std::size_t max_distance) const;

 private:
  const std::uint64_t* match_bits(char32_t c) const {
    std::uint32_t id = 0;
    if (c < 128) {
      id = ascii_ids_[c];
    } else if (auto it = other_ids_.find(c); it != other_ids_.end()) {
      id = it->second;
    }
    return peq_.data() + id * words_;
  }

  std::size_t length_ = 0;
  std::size_t words_ = 0;
  // Row 0 is the no-match vector; symbol ids index the following rows.
  std::vector<std::uint64_t> peq_;
  std::vector<std::uint32_t> ascii_ids_;
  std::unordered_map<char32_t, std::uint32_t> other_ids_;
};

}  // namespace kwprune
