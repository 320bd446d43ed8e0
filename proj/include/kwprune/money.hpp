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
#include <cstdint>
#include <string>
#include <string_view>

namespace kwprune {

/// Exact currency amount with two fractional digits (RMB cents).
///
/// All budget and profit arithmetic that must balance exactly goes through
/// this type. Conversions from binary floating point round half-to-even.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) {
    Money m;
    m.cents_ = cents;
    return m;
  }

  /// Parses "12", "12.5", "-3.10". More than two fractional digits, exponents
  /// and stray characters are rejected with std::invalid_argument.
  static Money parse(std::string_view text);

  /// Rounds half-to-even to the nearest cent.
  static Money from_double(double amount);

  constexpr std::int64_t cents() const { return cents_; }
  double to_double() const { return static_cast<double>(cents_) / 100.0; }

  /// Canonical rendering with exactly two fractional digits.
  std::string to_string() const;

  /// this * num / den, rounded half-to-even. den must be positive.
  Money scaled(std::int64_t num, std::int64_t den) const;

  /// this * factor, rounded half-to-even.
  Money scaled(double factor) const;

  constexpr Money operator-() const { return from_cents(-cents_); }
  constexpr Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  constexpr Money& operator-=(Money o) {
    cents_ -= o.cents_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  std::int64_t cents_ = 0;
};

}  // namespace kwprune
