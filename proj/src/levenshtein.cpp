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

#include "kwprune/levenshtein.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace kwprune {

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      out.push_back(c);
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    }
    bool ok = len != 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      ok = (cc & 0xC0) == 0x80;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (ok) {
      ok = !((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
             (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
             (cp >= 0xD800 && cp <= 0xDFFF));
    }
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(U'�');
      ++i;
    }
  }
  return out;
}

namespace {

using Word = std::uint64_t;
constexpr std::size_t kWordBits = 64;
// Columns advanced between band adjustments in distance_within().
constexpr long kColumnsPerPass = 4;

// One column step of a 64-row block in Myers' bit-vector algorithm (Myers
// 1999; block form after Hyyro 2003). hin is the horizontal delta entering
// the block's top row; the return value leaves its bottom row.
inline int block_step(Word& pv, Word& mv, Word eq, int hin) {
  const Word hin_neg = static_cast<Word>(hin < 0);
  const Word xv = eq | mv;
  eq |= hin_neg;
  const Word xh = (((eq & pv) + pv) ^ pv) | eq;
  Word ph = mv | ~(xh | pv);
  Word mh = pv & xh;
  const int hout = static_cast<int>(ph >> (kWordBits - 1)) -
                   static_cast<int>(mh >> (kWordBits - 1));
  ph <<= 1;
  mh <<= 1;
  mh |= hin_neg;
  ph |= static_cast<Word>(hin > 0);
  pv = mh | ~(xv | ph);
  mv = ph & xv;
  return hout;
}

struct Block {
  Word pv = ~Word{0};
  Word mv = 0;
  long score = 0;
};

// Value of the last real pattern row given the padded last block. The
// padding rows match every symbol.
long last_row_value(const Block& b, std::size_t m) {
  const std::size_t last_bit = (m - 1) % kWordBits;
  if (last_bit == kWordBits - 1) return b.score;
  const Word pad = ~Word{0} << (last_bit + 1);
  return b.score - std::popcount(b.pv & pad) + std::popcount(b.mv & pad);
}

}  // namespace

LevenshteinPattern::LevenshteinPattern(std::u32string_view pattern)
    : length_(pattern.size()),
      words_((pattern.size() + kWordBits - 1) / kWordBits),
      ascii_ids_(128, 0) {
  std::vector<char32_t> symbols;
  auto id_of = [&](char32_t c) -> std::uint32_t {
    if (c < 128) {
      if (ascii_ids_[c] == 0) {
        symbols.push_back(c);
        ascii_ids_[c] = static_cast<std::uint32_t>(symbols.size());
      }
      return ascii_ids_[c];
    }
    auto [it, inserted] =
        other_ids_.try_emplace(c, static_cast<std::uint32_t>(symbols.size() + 1));
    if (inserted) symbols.push_back(c);
    return it->second;
  };
  std::vector<std::uint32_t> ids;
  ids.reserve(pattern.size());
  for (char32_t c : pattern) ids.push_back(id_of(c));

  peq_.assign((symbols.size() + 1) * words_, 0);
  const std::size_t padded = words_ * kWordBits;
  for (std::size_t row = 0; row <= symbols.size(); ++row) {
    Word* bits = peq_.data() + row * words_;
    for (std::size_t i = length_; i < padded; ++i) {
      bits[i / kWordBits] |= Word{1} << (i % kWordBits);
    }
  }
  for (std::size_t i = 0; i < length_; ++i) {
    peq_[ids[i] * words_ + i / kWordBits] |= Word{1} << (i % kWordBits);
  }
}

std::size_t LevenshteinPattern::distance(std::u32string_view text) const {
  if (length_ == 0) return text.size();
  std::vector<Block> blocks(words_);
  for (std::size_t b = 0; b < words_; ++b) {
    blocks[b].score = static_cast<long>((b + 1) * kWordBits);
  }
  // Two columns per pass: column c+1 of block b only waits for column c of
  // block b, so the two carry chains overlap.
  std::size_t c = 0;
  for (; c + 1 < text.size(); c += 2) {
    const Word* eq0 = match_bits(text[c]);
    const Word* eq1 = match_bits(text[c + 1]);
    int h0 = 1;  // D[0][j] = j: the top row always increases by one
    int h1 = 1;
    for (std::size_t b = 0; b < words_; ++b) {
      Block& bl = blocks[b];
      h0 = block_step(bl.pv, bl.mv, eq0[b], h0);
      h1 = block_step(bl.pv, bl.mv, eq1[b], h1);
      bl.score += h0 + h1;
    }
  }
  if (c < text.size()) {
    const Word* eq = match_bits(text[c]);
    int h = 1;
    for (std::size_t b = 0; b < words_; ++b) {
      h = block_step(blocks[b].pv, blocks[b].mv, eq[b], h);
      blocks[b].score += h;
    }
  }
  return static_cast<std::size_t>(last_row_value(blocks.back(), length_));
}

// Ukkonen's band over the block algorithm, after the banded global mode of
// edlib (Sosic and Sikic 2017). Blocks that cannot lie on a path of cost at
// most k are skipped, and the scan stops once no block can. Columns are
// processed a few at a time so their carry chains overlap; the band is grown
// before a pass using a bound valid for all its columns and trimmed after it. Growing early or trimming
// late only computes extra cells, which never changes the result.
std::optional<std::size_t> LevenshteinPattern::distance_within(
    std::u32string_view text, std::size_t max_distance) const {
  const long m = static_cast<long>(length_);
  const long n = static_cast<long>(text.size());
  if (std::labs(m - n) > static_cast<long>(max_distance)) return std::nullopt;
  if (m == 0) return static_cast<std::size_t>(n);
  const long w = static_cast<long>(kWordBits);
  const long max_blocks = static_cast<long>(words_);
  long k = std::min<long>(static_cast<long>(max_distance), std::max(m, n));

  std::vector<Block> blocks(words_);
  for (long b = 0; b < max_blocks; ++b) blocks[b].score = (b + 1) * w;
  long first = 0;
  long last = std::min((k + 1 + w - 1) / w, max_blocks) - 1;
  const long pad = max_blocks * w - m;

  for (long c = 0; c < n;) {
    const long span = std::min(kColumnsPerPass, n - c);
    const long end = c + span - 1;  // last column of this pass

    // Scores can drop by at most one per column, so this admits every block
    // the per-column rule would add during the pass.
    for (long added = 0; added < span && last + 1 < max_blocks; ++added) {
      const long low_score = blocks[last].score - span;
      if ((last + 1) * w - 1 > k - low_score + 2 * w - 2 - n + end + m) break;
      ++last;
      blocks[last].pv = ~Word{0};
      blocks[last].mv = 0;
      blocks[last].score = blocks[last - 1].score + w;
    }

    if (span == kColumnsPerPass) {
      const Word* eq0 = match_bits(text[c]);
      const Word* eq1 = match_bits(text[c + 1]);
      const Word* eq2 = match_bits(text[c + 2]);
      const Word* eq3 = match_bits(text[c + 3]);
      int h0 = 1;
      int h1 = 1;
      int h2 = 1;
      int h3 = 1;
      for (long b = first; b <= last; ++b) {
        Block& bl = blocks[b];
        h0 = block_step(bl.pv, bl.mv, eq0[b], h0);
        h1 = block_step(bl.pv, bl.mv, eq1[b], h1);
        h2 = block_step(bl.pv, bl.mv, eq2[b], h2);
        h3 = block_step(bl.pv, bl.mv, eq3[b], h3);
        bl.score += h0 + h1 + h2 + h3;
      }
    } else {
      for (long col = c; col <= end; ++col) {
        const Word* eq = match_bits(text[col]);
        int h = 1;
        for (long b = first; b <= last; ++b) {
          h = block_step(blocks[b].pv, blocks[b].mv, eq[b], h);
          blocks[b].score += h;
        }
      }
    }

    k = std::min(k, blocks[last].score + std::max(n - end - 1, m - ((1 + last) * w - 1) - 1) +
                        (last == max_blocks - 1 ? pad : 0));
    while (last >= first &&
           (blocks[last].score >= k + w ||
            (last + 1) * w - 1 > k - blocks[last].score + 2 * w - 2 - n + end + m + 1)) {
      --last;
    }
    while (first <= last &&
           (blocks[first].score >= k + w ||
            (first + 1) * w - 1 < blocks[first].score - k - n + m + end)) {
      ++first;
    }
    if (last < first) return std::nullopt;
    c = end + 1;
  }
  if (last != max_blocks - 1) return std::nullopt;
  const long best = last_row_value(blocks[last], length_);
  if (best > static_cast<long>(max_distance)) return std::nullopt;
  return static_cast<std::size_t>(best);
}

namespace {

void trim_affixes(std::u32string_view& a, std::u32string_view& b) {
  // Shared affixes never contribute to the distance.
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.size() > b.size()) std::swap(a, b);
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  trim_affixes(a, b);
  if (a.empty()) return b.size();
  return LevenshteinPattern(a).distance(b);
}

std::optional<std::size_t> levenshtein_within(std::u32string_view a, std::u32string_view b,
                                              std::size_t max_distance) {
  trim_affixes(a, b);
  if (a.empty()) {
    if (b.size() > max_distance) return std::nullopt;
    return b.size();
  }
  return LevenshteinPattern(a).distance_within(b, max_distance);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(decode_utf8(a)),
                     std::u32string_view(decode_utf8(b)));
}

}  // namespace kwprune
