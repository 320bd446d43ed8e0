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
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kwprune::csv {

/// One parsed CSV record and the 1-based line on which it starts.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// line breaks. CRLF and LF line endings are both accepted.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Returns std::nullopt at end of input. Throws csv::ParseError on an
  /// unterminated quoted field or garbage after a closing quote.
  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_no, std::string why)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + why),
        line(line_no),
        reason(std::move(why)) {}
  std::size_t line;
  std::string reason;
};

/// Quotes the field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Joins escaped fields with commas (no trailing newline).
std::string join(const std::vector<std::string>& fields);

}  // namespace kwprune::csv
