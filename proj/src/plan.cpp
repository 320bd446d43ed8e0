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
#include "kwprune/plan.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <set>

namespace kwprune {

namespace {

constexpr std::string_view kGrammar =
    R"(plan       := statement (NEWLINE statement)* ;
statement  := filter | sort | score | keep | drop | trend ;
filter     := "FILTER" metric cmp NUMBER ;
sort       := "SORT" metric ("ASC" | "DESC") ;
score      := "SCORE" term ("," term)* ;
term       := metric "*" NUMBER ;
keep       := "KEEP_TOP" INT ;
drop       := "DROP_BOTTOM" INT ;
trend      := "TREND" ;
cmp        := ">=" | "<=" | ">" | "<" | "=" ;
metric     := "mean_impressions" | "mean_clicks" | "mean_conversions"
            | "ctr" | "cvr" | "impression_slope" | "total_profit"
            | "total_cost" | "score" ;)";

constexpr std::string_view kToolDocs =
    R"(Pruning plans are line-oriented programs over a table with one row per keyword.
Columns (7-day window): mean_impressions, mean_clicks, mean_conversions (daily means);
ctr = clicks / impressions; cvr = conversions / clicks (0 when the denominator is 0);
impression_slope (least-squares trend of daily impressions); total_profit, total_cost
(window sums, RMB); score (only after SCORE has run).

Statements, applied top to bottom:
  FILTER <metric> <cmp> <number>   keep rows satisfying the comparison
  SORT <metric> ASC|DESC           stable sort by one column
  SCORE <metric> * <w>, ...        score = sum of w * column min-max normalised to [0,1]
                                   (constant columns count as 0.5); rows are then
                                   ordered by descending score. At most one SCORE.
  KEEP_TOP <n>                     keep the first n rows (n >= 1); needs an earlier
                                   SORT or SCORE
  DROP_BOTTOM <n>                  remove the last n rows, never all of them
  TREND                            mark impression_slope for trend analysis
Comments start with '#'. The engine never keeps fewer than N_min keywords: if a
step would, the best-ranked removed keywords are restored.

Grammar (EBNF):
)";

struct Token {
  enum Kind { Ident, Number, Cmp, Comma, Star } kind;
  std::string text;
  std::size_t column;
  Comparator cmp = Comparator::Eq;
};

struct RawMetric {
  std::string name;
  SourceLocation loc;
};

enum class StmtKind { Filter, Sort, Score, Keep, Drop, Trend };

struct RawStatement {
  StmtKind kind;
  SourceLocation loc;
  std::string line_text;
  RawMetric metric;
  Comparator cmp = Comparator::Eq;
  double number = 0;
  Direction direction = Direction::Ascending;
  std::vector<std::pair<RawMetric, double>> terms;
  long long count = 0;
  SourceLocation count_loc;
  std::string count_text;
};

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t utf8_len(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    const std::size_t col = i + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < line.size() && is_ident_char(line[j])) ++j;
      out.push_back({Token::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (is_digit(c) || c == '.' ||
               ((c == '-' || c == '+') && i + 1 < line.size() &&
                (is_digit(line[i + 1]) || line[i + 1] == '.'))) {
      std::size_t j = i;
      if (line[j] == '-' || line[j] == '+') ++j;
      std::size_t digits = 0;
      while (j < line.size() && is_digit(line[j])) ++j, ++digits;
      if (j < line.size() && line[j] == '.') {
        ++j;
        while (j < line.size() && is_digit(line[j])) ++j, ++digits;
      }
      if (digits > 0 && j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && is_digit(line[k])) {
          while (k < line.size() && is_digit(line[k])) ++k;
          j = k;
        }
      }
      if (digits == 0) {
        throw PlanError(PlanErrorKind::Parse, line_no, col,
                        "malformed number", std::string(line.substr(i, j - i)));
      }
      out.push_back({Token::Number, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (c == '>' || c == '<') {
      bool eq = i + 1 < line.size() && line[i + 1] == '=';
      Comparator cmp = c == '>' ? (eq ? Comparator::Ge : Comparator::Gt)
                                : (eq ? Comparator::Le : Comparator::Lt);
      std::size_t len = eq ? 2 : 1;
      out.push_back({Token::Cmp, std::string(line.substr(i, len)), col, cmp});
      i += len;
    } else if (c == '=') {
      out.push_back({Token::Cmp, "=", col, Comparator::Eq});
      ++i;
    } else if (line.substr(i).starts_with("≥")) {
      out.push_back({Token::Cmp, "≥", col, Comparator::Ge});
      i += 3;
    } else if (line.substr(i).starts_with("≤")) {
      out.push_back({Token::Cmp, "≤", col, Comparator::Le});
      i += 3;
    } else if (c == ',') {
      out.push_back({Token::Comma, ",", col});
      ++i;
    } else if (c == '*') {
      out.push_back({Token::Star, "*", col});
      ++i;
    } else {
      std::size_t len = std::min(utf8_len(static_cast<unsigned char>(c)), line.size() - i);
      std::string bad(line.substr(i, len));
      throw PlanError(PlanErrorKind::Parse, line_no, col,
                      "unexpected character '" + bad + "'", bad);
    }
  }
  return out;
}

double to_double(const Token& tok, std::size_t line_no) {
  std::string_view s = tok.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw PlanError(PlanErrorKind::Parse, line_no, tok.column,
                    "number out of range '" + tok.text + "'", tok.text);
  }
  return v;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line_no, std::string_view line)
      : toks_(std::move(tokens)), line_no_(line_no), line_(line) {}

  RawStatement parse() {
    const Token& head = toks_.front();
    RawStatement st;
    st.loc = {line_no_, head.column};
    st.line_text = trim(line_);
    if (head.kind != Token::Ident) {
      fail(head, "expected a statement keyword, found '" + head.text + "'");
    }
    pos_ = 1;
    const std::string& kw = head.text;
    if (kw == "FILTER") {
      st.kind = StmtKind::Filter;
      st.metric = expect_metric(kw);
      const Token& cmp = expect(Token::Cmp, "comparison operator (>=, <=, >, <, =)");
      st.cmp = cmp.cmp;
      st.number = to_double(expect(Token::Number, "number"), line_no_);
    } else if (kw == "SORT") {
      st.kind = StmtKind::Sort;
      st.metric = expect_metric(kw);
      const Token& dir = expect(Token::Ident, "ASC or DESC");
      if (dir.text == "ASC") {
        st.direction = Direction::Ascending;
      } else if (dir.text == "DESC") {
        st.direction = Direction::Descending;
      } else {
        fail(dir, "expected ASC or DESC, found '" + dir.text + "'");
      }
    } else if (kw == "SCORE") {
      st.kind = StmtKind::Score;
      do {
        RawMetric m = expect_metric(kw);
        expect(Token::Star, "'*' after metric in SCORE term");
        double w = to_double(expect(Token::Number, "weight"), line_no_);
        st.terms.emplace_back(std::move(m), w);
      } while (accept(Token::Comma));
    } else if (kw == "KEEP_TOP" || kw == "DROP_BOTTOM") {
      st.kind = kw == "KEEP_TOP" ? StmtKind::Keep : StmtKind::Drop;
      const Token& n = expect(Token::Number, "integer");
      if (n.text.find_first_of(".eE") != std::string::npos) {
        fail(n, "expected integer, found '" + n.text + "'");
      }
      std::string_view s = n.text;
      if (s.front() == '+') s.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), st.count);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail(n, "integer out of range '" + n.text + "'");
      }
      st.count_loc = {line_no_, n.column};
      st.count_text = n.text;
    } else if (kw == "TREND") {
      st.kind = StmtKind::Trend;
    } else {
      fail(head, "unknown statement '" + kw +
                     "' (expected FILTER, SORT, SCORE, KEEP_TOP, DROP_BOTTOM or TREND)");
    }
    if (pos_ < toks_.size()) {
      fail(toks_[pos_], "unexpected '" + toks_[pos_].text + "' after " + kw +
                            " statement");
    }
    return st;
  }

 private:
  [[noreturn]] void fail(const Token& tok, std::string message) {
    throw PlanError(PlanErrorKind::Parse, line_no_, tok.column, std::move(message),
                    tok.text);
  }

  const Token& expect(Token::Kind kind, std::string_view what) {
    if (pos_ >= toks_.size()) {
      throw PlanError(PlanErrorKind::Parse, line_no_, line_.size() + 1,
                      "unexpected end of input, expected " + std::string(what),
                      trim(line_));
    }
    const Token& t = toks_[pos_];
    if (t.kind != kind) {
      fail(t, "expected " + std::string(what) + ", found '" + t.text + "'");
    }
    ++pos_;
    return t;
  }

  bool accept(Token::Kind kind) {
    if (pos_ < toks_.size() && toks_[pos_].kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }

  RawMetric expect_metric(std::string_view after) {
    const Token& t = expect(Token::Ident, "metric name after " + std::string(after));
    return RawMetric{t.text, {line_no_, t.column}};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
  std::string_view line_;
};

class SemanticChecker {
 public:
  Statement check(const RawStatement& st) {
    switch (st.kind) {
      case StmtKind::Filter:
        return FilterStmt{resolve(st.metric), st.cmp, st.number};
      case StmtKind::Sort: {
        Metric m = resolve(st.metric);
        ordered_ = true;
        return SortStmt{m, st.direction};
      }
      case StmtKind::Score: {
        if (score_seen_) {
          throw PlanError(PlanErrorKind::Semantic, st.loc.line, st.loc.column,
                          "duplicate SCORE: a plan may score at most once",
                          st.line_text);
        }
        ScoreStmt out;
        for (const auto& [raw, weight] : st.terms) {
          Metric m = resolve(raw);
          if (m == Metric::Score) {
            throw PlanError(PlanErrorKind::Semantic, raw.loc.line, raw.loc.column,
                            "'score' cannot be a SCORE term", raw.name);
          }
          out.terms.push_back({m, weight});
        }
        score_seen_ = scored_ = ordered_ = true;
        return out;
      }
      case StmtKind::Keep:
        if (!ordered_) {
          throw PlanError(PlanErrorKind::Semantic, st.loc.line, st.loc.column,
                          "KEEP_TOP requires prior SORT or SCORE", st.line_text);
        }
        if (st.count <= 0) {
          throw PlanError(PlanErrorKind::Semantic, st.count_loc.line,
                          st.count_loc.column,
                          "KEEP_TOP argument must be positive, got " + st.count_text,
                          st.count_text);
        }
        return KeepTopStmt{static_cast<std::size_t>(st.count)};
      case StmtKind::Drop:
        if (st.count < 0) {
          throw PlanError(PlanErrorKind::Semantic, st.count_loc.line,
                          st.count_loc.column,
                          "DROP_BOTTOM argument must be non-negative, got " +
                              st.count_text,
                          st.count_text);
        }
        return DropBottomStmt{static_cast<std::size_t>(st.count)};
      case StmtKind::Trend:
        return TrendStmt{};
    }
    throw PlanError(PlanErrorKind::Semantic, st.loc.line, st.loc.column,
                    "unsupported statement", st.line_text);
  }

 private:
  Metric resolve(const RawMetric& raw) {
    auto m = parse_metric(raw.name);
    if (!m) {
      throw PlanError(PlanErrorKind::Semantic, raw.loc.line, raw.loc.column,
                      "unknown metric '" + raw.name + "'", raw.name);
    }
    if (*m == Metric::Score && !scored_) {
      throw PlanError(PlanErrorKind::Semantic, raw.loc.line, raw.loc.column,
                      "metric 'score' used before SCORE", raw.name);
    }
    return *m;
  }

  bool ordered_ = false;
  bool scored_ = false;
  bool score_seen_ = false;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

// -- errors ------------------------------------------------------------------

std::string_view plan_error_kind_name(PlanErrorKind kind) {
  switch (kind) {
    case PlanErrorKind::Parse: return "parse";
    case PlanErrorKind::Semantic: return "semantic";
    case PlanErrorKind::Constraint: return "constraint";
  }
  return "?";
}

PlanError::PlanError(PlanErrorKind k, std::size_t l, std::size_t c,
                     std::string msg, std::string ex)
    : std::runtime_error(std::string(plan_error_kind_name(k)) + " error at line " +
                         std::to_string(l) + ", column " + std::to_string(c) +
                         ": " + msg),
      kind(k),
      line(l),
      column(c),
      message(std::move(msg)),
      excerpt(std::move(ex)) {}

PlanError PlanError::constraint(std::size_t n_min, std::size_t attempted) {
  PlanError e(PlanErrorKind::Constraint, 0, 0,
              "plan retained " + std::to_string(attempted) +
                  " keywords but n_min=" + std::to_string(n_min) +
                  " requires at least " + std::to_string(n_min),
              "");
  e.n_min = n_min;
  e.attempted = attempted;
  return e;
}

// -- parsing -----------------------------------------------------------------

std::string_view plan_grammar() { return kGrammar; }

std::string_view toolset_documentation() {
  static const std::string doc = std::string(kToolDocs) + std::string(kGrammar);
  return doc;
}

PruningPlan parse_plan(std::string_view source) {
  std::vector<RawStatement> raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto nl = source.find('\n', pos);
    std::string_view line =
        source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto tokens = tokenize(line, line_no);
    if (!tokens.empty()) {
      raw.push_back(LineParser(std::move(tokens), line_no, line).parse());
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (raw.empty()) {
    throw PlanError(PlanErrorKind::Parse, line_no, 1,
                    "unexpected end of input: the plan has no statements", "");
  }

  PruningPlan plan;
  plan.source_text = std::string(source);
  SemanticChecker checker;
  for (const auto& st : raw) {
    plan.statements.push_back(checker.check(st));
    plan.locations.push_back(st.loc);
  }
  return plan;
}

std::string print_statement(const Statement& stmt) {
  struct Printer {
    std::string operator()(const FilterStmt& s) const {
      return "FILTER " + std::string(metric_name(s.metric)) + " " +
             std::string(comparator_symbol(s.cmp)) + " " + format_number(s.threshold);
    }
    std::string operator()(const SortStmt& s) const {
      return "SORT " + std::string(metric_name(s.metric)) +
             (s.direction == Direction::Ascending ? " ASC" : " DESC");
    }
    std::string operator()(const ScoreStmt& s) const {
      std::string out = "SCORE ";
      for (std::size_t i = 0; i < s.terms.size(); ++i) {
        if (i) out += ", ";
        out += std::string(metric_name(s.terms[i].metric)) + " * " +
               format_number(s.terms[i].weight);
      }
      return out;
    }
    std::string operator()(const KeepTopStmt& s) const {
      return "KEEP_TOP " + std::to_string(s.n);
    }
    std::string operator()(const DropBottomStmt& s) const {
      return "DROP_BOTTOM " + std::to_string(s.n);
    }
    std::string operator()(const TrendStmt&) const { return "TREND"; }
  };
  return std::visit(Printer{}, stmt);
}

std::string print_plan(const PruningPlan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.statements.size(); ++i) {
    if (i) out += '\n';
    out += print_statement(plan.statements[i]);
  }
  return out;
}

// -- interpretation ----------------------------------------------------------

StatsTable apply_statement(const Statement& stmt, const StatsTable& table) {
  struct Apply {
    const StatsTable& t;
    StatsTable operator()(const FilterStmt& s) const {
      return tool_filter(t, s.metric, s.cmp, s.threshold);
    }
    StatsTable operator()(const SortStmt& s) const {
      return tool_sort(t, s.metric, s.direction);
    }
    StatsTable operator()(const ScoreStmt& s) const { return tool_score(t, s.terms); }
    StatsTable operator()(const KeepTopStmt& s) const { return tool_keep_top(t, s.n); }
    StatsTable operator()(const DropBottomStmt& s) const {
      return tool_drop_bottom(t, s.n);
    }
    StatsTable operator()(const TrendStmt&) const { return tool_trend(t); }
  };
  return std::visit(Apply{table}, stmt);
}

PlanOutcome interpret_plan(const PruningPlan& plan, const StatsTable& table,
                           std::size_t n_min) {
  if (table.empty()) {
    throw std::invalid_argument("interpret_plan requires a non-empty table");
  }
  const std::size_t floor = std::min(n_min, table.size());
  PlanOutcome outcome;
  StatsTable current = table;
  for (const auto& stmt : plan.statements) {
    StatsTable next = apply_statement(stmt, current);
    ++outcome.statements_executed;
    if (next.size() < floor) {
      outcome.clamped = true;
      std::set<std::string_view> kept;
      for (const auto& row : next.rows) kept.insert(row.stats.keyword);
      std::size_t missing = floor - next.size();
      StatsTable restored{{}, next.provenance, next.scored};
      for (const auto& row : current.rows) {
        if (kept.contains(row.stats.keyword)) {
          restored.rows.push_back(row);
        } else if (missing > 0) {
          restored.rows.push_back(row);
          --missing;
        }
      }
      next = std::move(restored);
    }
    current = std::move(next);
  }
  if (current.size() < floor) {
    throw PlanError::constraint(n_min, current.size());
  }
  outcome.retained = current.keywords();
  return outcome;
}

std::string explain_error(const PlanError& error) {
  std::string out = "The pruning plan failed with a " +
                    std::string(plan_error_kind_name(error.kind)) + " error";
  if (error.kind == PlanErrorKind::Constraint) {
    out += ": the plan retained " + std::to_string(error.attempted) +
           " keywords, below the floor n_min=" + std::to_string(error.n_min) + ". ";
  } else {
    out += " at line " + std::to_string(error.line) + ", column " +
           std::to_string(error.column) + ": " + error.message + ".";
    if (!error.excerpt.empty()) {
      out += " Offending text: \"" + error.excerpt + "\".";
    }
    out += " ";
  }
  out += "Write a corrected plan that follows this grammar exactly:\n";
  out += kGrammar;
  return out;
}

std::string extract_plan_text(std::string_view completion) {
  std::string text = trim(completion);
  if (text.starts_with("```")) {
    auto first_nl = text.find('\n');
    text = first_nl == std::string::npos ? std::string{} : text.substr(first_nl + 1);
    auto fence = text.rfind("```");
    if (fence != std::string::npos) text = text.substr(0, fence);
  }
  // Trim surrounding blank lines but keep interior layout.
  auto b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

}  // namespace kwprune
