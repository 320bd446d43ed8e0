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
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kwprune/toolset.hpp"

namespace kwprune {

// -- statements --------------------------------------------------------------

struct FilterStmt {
  Metric metric;
  Comparator cmp;
  double threshold;
  friend bool operator==(const FilterStmt&, const FilterStmt&) = default;
};

struct SortStmt {
  Metric metric;
  Direction direction;
  friend bool operator==(const SortStmt&, const SortStmt&) = default;
};

struct ScoreStmt {
  std::vector<ScoreTerm> terms;
  friend bool operator==(const ScoreStmt&, const ScoreStmt&) = default;
};

struct KeepTopStmt {
  std::size_t n;
  friend bool operator==(const KeepTopStmt&, const KeepTopStmt&) = default;
};

struct DropBottomStmt {
  std::size_t n;
  friend bool operator==(const DropBottomStmt&, const DropBottomStmt&) = default;
};

struct TrendStmt {
  friend bool operator==(const TrendStmt&, const TrendStmt&) = default;
};

using Statement =
    std::variant<FilterStmt, SortStmt, ScoreStmt, KeepTopStmt, DropBottomStmt, TrendStmt>;

struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// A parsed and validated pruning program.
struct PruningPlan {
  std::vector<Statement> statements;
  /// Location of each statement's first token, parallel to `statements`.
  std::vector<SourceLocation> locations;
  std::string source_text;

  /// Structural equality: statements only, ignoring layout and comments.
  friend bool operator==(const PruningPlan& a, const PruningPlan& b) {
    return a.statements == b.statements;
  }
};

// -- errors ------------------------------------------------------------------

enum class PlanErrorKind { Parse, Semantic, Constraint };

std::string_view plan_error_kind_name(PlanErrorKind kind);

/// A structured, promptable plan failure.
///
/// For Parse and Semantic errors, line and column (both 1-based, column in
/// bytes) point into the plan source. Constraint errors carry the floor and
/// the retention count that violated it; line and column are 0.
class PlanError : public std::runtime_error {
 public:
  PlanError(PlanErrorKind kind, std::size_t line, std::size_t column,
            std::string message, std::string excerpt);

  static PlanError constraint(std::size_t n_min, std::size_t attempted);

  PlanErrorKind kind;
  std::size_t line;
  std::size_t column;
  std::string message;
  std::string excerpt;
  std::size_t n_min = 0;
  std::size_t attempted = 0;
};

// -- operations --------------------------------------------------------------

/// The plan grammar in EBNF, as shown to the code-writing agent.
std::string_view plan_grammar();

/// Grammar plus a description of every tool; the tool documentation block
/// of the knowledge prompt.
std::string_view toolset_documentation();

/// Parses and validates. All syntax errors are detected before any semantic
/// check runs, so the first syntax error wins. Throws PlanError.
PruningPlan parse_plan(std::string_view source);

/// Canonical text: one statement per line, ASCII comparators, shortest
/// round-tripping numbers. parse_plan(print_plan(p)) == p.
std::string print_plan(const PruningPlan& plan);
std::string print_statement(const Statement& stmt);

struct PlanOutcome {
  std::vector<std::string> retained;
  /// True if any statement tried to shrink the set below the floor.
  bool clamped = false;
  std::size_t statements_executed = 0;

  friend bool operator==(const PlanOutcome&, const PlanOutcome&) = default;
};

/// Applies one statement through the tool set, with no floor handling.
StatsTable apply_statement(const Statement& stmt, const StatsTable& table);

/// Runs the plan with a retention floor of min(n_min, table size).
///
/// Whenever a statement would leave fewer rows than the floor, the rows it
/// removed are restored in their pre-statement order (which is the order of
/// the most recent SORT or SCORE, or keyword-ascending if none ran yet) until
/// the floor is met, and `clamped` is set.
PlanOutcome interpret_plan(const PruningPlan& plan, const StatsTable& table,
                           std::size_t n_min);

/// One paragraph for a human or the repair prompt: kind, location, message,
/// excerpt, and the grammar.
std::string explain_error(const PlanError& error);

/// Strips surrounding Markdown code fences that chat models like to add.
std::string extract_plan_text(std::string_view completion);

}  // namespace kwprune
