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

#include <gtest/gtest.h>

#include <stdexcept>

namespace kwprune {
namespace {

TEST(Money, ParsesAndPrintsCanonicalForm) {
  EXPECT_EQ(Money::parse("12").cents(), 1200);
  EXPECT_EQ(Money::parse("12.5").cents(), 1250);
  EXPECT_EQ(Money::parse("-3.10").cents(), -310);
  EXPECT_EQ(Money::parse("0.07").to_string(), "0.07");
  EXPECT_EQ(Money::from_cents(-5).to_string(), "-0.05");
  EXPECT_EQ(Money::from_cents(123456).to_string(), "1234.56");
}

TEST(Money, RejectsMalformedAmounts) {
  for (const char* bad : {"", "1.234", "1e3", "abc", "1.2.3", "--1", "1,00", " "}) {
    EXPECT_THROW(Money::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Money, ScalingRoundsHalfToEven) {
  EXPECT_EQ(Money::from_cents(1).scaled(1, 2).cents(), 0);
  EXPECT_EQ(Money::from_cents(3).scaled(1, 2).cents(), 2);
  EXPECT_EQ(Money::from_cents(-3).scaled(1, 2).cents(), -2);
  EXPECT_EQ(Money::from_cents(800).scaled(7, 5).cents(), 1120);
  EXPECT_EQ(Money::from_double(0.125).cents(), 12);
  EXPECT_EQ(Money::from_double(0.375).cents(), 38);
  EXPECT_EQ(Money::from_cents(500).scaled(2.0).cents(), 1000);
}

TEST(Money, Arithmetic) {
  Money a = Money::parse("5.00"), b = Money::parse("3.00");
  EXPECT_EQ((a + b).to_string(), "8.00");
  EXPECT_EQ((b - a).to_string(), "-2.00");
  EXPECT_LT(b, a);
  EXPECT_EQ(-a, Money::from_cents(-500));
}

}  // namespace
}  // namespace kwprune
