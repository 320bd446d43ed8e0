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
#include "kwprune/money.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace kwprune {

namespace {

__extension__ using Int128 = __int128;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Rounds numerator/denominator half-to-even; denominator > 0.
std::int64_t div_round_half_even(Int128 num, Int128 den) {
  Int128 q = num / den;
  Int128 r = num % den;
  if (r < 0) {
    r += den;
    q -= 1;
  }
  Int128 twice = 2 * r;
  if (twice > den || (twice == den && (q % 2 != 0))) {
    q += 1;
  }
  if (q > std::numeric_limits<std::int64_t>::max() ||
      q < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("currency amount out of range");
  }
  return static_cast<std::int64_t>(q);
}

}  // namespace

Money Money::parse(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("empty currency amount");
  }
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-') {
    negative = true;
    i = 1;
  }
  std::int64_t whole = 0;
  std::size_t whole_digits = 0;
  for (; i < text.size() && is_digit(text[i]); ++i, ++whole_digits) {
    if (whole > (std::numeric_limits<std::int64_t>::max() / 100 - 9) / 10) {
      throw std::invalid_argument("currency amount out of range: " +
                                  std::string(text));
    }
    whole = whole * 10 + (text[i] - '0');
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && is_digit(text[i]); ++i, ++frac_digits) {
      frac = frac * 10 + (text[i] - '0');
    }
    if (frac_digits == 0 || frac_digits > 2) {
      throw std::invalid_argument("currency needs 1-2 fractional digits: " +
                                  std::string(text));
    }
    if (frac_digits == 1) frac *= 10;
  }
  if (i != text.size() || whole_digits == 0) {
    throw std::invalid_argument("malformed currency amount: " +
                                std::string(text));
  }
  std::int64_t cents = whole * 100 + frac;
  return from_cents(negative ? -cents : cents);
}

Money Money::from_double(double amount) {
  if (!std::isfinite(amount)) {
    throw std::invalid_argument("non-finite currency amount");
  }
  // nearbyint honours the default FE_TONEAREST mode, i.e. half-to-even.
  double cents = std::nearbyint(amount * 100.0);
  if (std::fabs(cents) > 9.0e18) {
    throw std::overflow_error("currency amount out of range");
  }
  return from_cents(static_cast<std::int64_t>(cents));
}

std::string Money::to_string() const {
  std::int64_t abs = cents_ < 0 ? -cents_ : cents_;
  std::string out = cents_ < 0 ? "-" : "";
  out += std::to_string(abs / 100);
  out += '.';
  std::int64_t frac = abs % 100;
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

Money Money::scaled(std::int64_t num, std::int64_t den) const {
  if (den <= 0) {
    throw std::invalid_argument("scale denominator must be positive");
  }
  return from_cents(div_round_half_even(static_cast<Int128>(cents_) * num, den));
}

Money Money::scaled(double factor) const {
  if (!std::isfinite(factor)) {
    throw std::invalid_argument("non-finite scale factor");
  }
  double cents = std::nearbyint(static_cast<double>(cents_) * factor);
  if (std::fabs(cents) > 9.0e18) {
    throw std::overflow_error("currency amount out of range");
  }
  return from_cents(static_cast<std::int64_t>(cents));
}

}  // namespace kwprune
