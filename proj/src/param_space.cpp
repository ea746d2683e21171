// Copyright 2026 The evoracer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evoracer/param_space.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "evoracer/error.hpp"
#include "evoracer/util.hpp"

namespace evoracer {
namespace {

std::string unquote(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') &&
      text.back() == text.front()) {
    text = text.substr(1, text.size() - 2);
  }
  return std::string(text);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

// Splits "a, b, c" honoring quotes.
std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  char quote = 0;
  for (const char c : text) {
    if (quote != 0) {
      if (c == quote) quote = 0;
      current.push_back(c);
    } else if (c == '"' || c == '\'') {
      quote = c;
      current.push_back(c);
    } else if (c == ',') {
      out.push_back(unquote(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!trim(current).empty() || !out.empty()) out.push_back(unquote(current));
  return out;
}

ParamKind parse_kind(std::string_view token, std::size_t line_no) {
  if (token == "r" || token == "real") return ParamKind::kReal;
  if (token == "i" || token == "integer") return ParamKind::kInteger;
  if (token == "c" || token == "categorical" || token == "o" || token == "ordinal")
    return ParamKind::kCategorical;
  if (token == "b" || token == "boolean") return ParamKind::kBoolean;
  throw Error(ErrorCode::kMalformedInput,
              "parameter file line " + std::to_string(line_no) +
                  ": unknown kind '" + std::string(token) + "'");
}

ConditionClause parse_clause(std::string_view text, std::size_t line_no) {
  text = trim(text);
  auto fail = [&]() -> ConditionClause {
    throw Error(ErrorCode::kMalformedInput,
                "parameter file line " + std::to_string(line_no) +
                    ": cannot parse condition '" + std::string(text) + "'");
  };
  ConditionClause clause;
  const std::size_t name_end = text.find_first_of(" \t=!<>%");
  if (name_end == std::string_view::npos || name_end == 0) return fail();
  clause.param = std::string(text.substr(0, name_end));
  std::string_view rest = trim(text.substr(name_end));

  auto take_list = [&](std::string_view list) {
    list = trim(list);
    if (list.starts_with("c(")) list.remove_prefix(1);
    if (list.size() < 2 || list.front() != '(' || list.back() != ')') fail();
    clause.operands = split_list(list.substr(1, list.size() - 2));
  };

  if (rest.starts_with("%in%")) {
    clause.op = ConditionClause::Op::kIn;
    take_list(rest.substr(4));
  } else if (starts_with_word(rest, "in")) {
    clause.op = ConditionClause::Op::kIn;
    take_list(rest.substr(2));
  } else {
    static constexpr std::pair<std::string_view, ConditionClause::Op> kOps[] = {
        {"==", ConditionClause::Op::kEq}, {"!=", ConditionClause::Op::kNe},
        {"<=", ConditionClause::Op::kLe}, {">=", ConditionClause::Op::kGe},
        {"<", ConditionClause::Op::kLt},  {">", ConditionClause::Op::kGt},
    };
    bool matched = false;
    for (const auto& [symbol, op] : kOps) {
      if (rest.starts_with(symbol)) {
        clause.op = op;
        clause.operands = {unquote(rest.substr(symbol.size()))};
        matched = true;
        break;
      }
    }
    if (!matched) return fail();
  }
  if (clause.operands.empty()) return fail();
  return clause;
}

bool clause_holds(const ConditionClause& clause, const ParamDef& def,
                  const ParamValue& value) {
  using Op = ConditionClause::Op;
  if (def.is_numeric()) {
    const double v = std::holds_alternative<double>(value)
                         ? std::get<double>(value)
                         : static_cast<double>(std::get<std::int64_t>(value));
    auto operand = [&](const std::string& s) {
      const auto parsed = parse_number(s);
      return parsed ? *parsed : std::nan("");
    };
    switch (clause.op) {
      case Op::kEq: return v == operand(clause.operands[0]);
      case Op::kNe: return v != operand(clause.operands[0]);
      case Op::kLt: return v < operand(clause.operands[0]);
      case Op::kLe: return v <= operand(clause.operands[0]);
      case Op::kGt: return v > operand(clause.operands[0]);
      case Op::kGe: return v >= operand(clause.operands[0]);
      case Op::kIn:
        for (const auto& o : clause.operands) {
          if (v == operand(o)) return true;
        }
        return false;
    }
  }
  const std::string& label = std::get<std::string>(value);
  switch (clause.op) {
    case Op::kEq: return label == clause.operands[0];
    case Op::kNe: return label != clause.operands[0];
    case Op::kIn:
      for (const auto& o : clause.operands) {
        if (label == o) return true;
      }
      return false;
    default: return false;
  }
}

}  // namespace

const char* param_kind_name(ParamKind kind) {
  switch (kind) {
    case ParamKind::kReal: return "real";
    case ParamKind::kInteger: return "integer";
    case ParamKind::kCategorical: return "categorical";
    case ParamKind::kBoolean: return "boolean";
  }
  return "?";
}

std::string format_param_value(const ParamValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  return std::get<std::string>(value);
}

bool ParamDef::contains(const ParamValue& value) const {
  switch (kind) {
    case ParamKind::kReal: {
      const auto* d = std::get_if<double>(&value);
      return d != nullptr && std::isfinite(*d) && *d >= lower && *d <= upper;
    }
    case ParamKind::kInteger: {
      const auto* i = std::get_if<std::int64_t>(&value);
      return i != nullptr && static_cast<double>(*i) >= lower &&
             static_cast<double>(*i) <= upper;
    }
    case ParamKind::kCategorical:
    case ParamKind::kBoolean: {
      const auto* s = std::get_if<std::string>(&value);
      if (s == nullptr) return false;
      for (const auto& v : values) {
        if (v == *s) return true;
      }
      return false;
    }
  }
  return false;
}

double ParamAssignment::numeric(const std::string& name) const {
  const ParamValue& v = values_.at(name);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error(ErrorCode::kTypeMismatch, "parameter " + name + " is not numeric");
}

ParamSpace::ParamSpace(std::vector<ParamDef> params) : params_(std::move(params)) {
  check_invariants();
}

void ParamSpace::check_invariants() const {
  std::set<std::string> seen;
  for (const auto& def : params_) {
    if (def.name.empty()) {
      throw Error(ErrorCode::kMalformedInput, "parameter with empty name");
    }
    if (!seen.insert(def.name).second) {
      throw Error(ErrorCode::kMalformedInput, "duplicate parameter " + def.name);
    }
    if (def.is_numeric() && !(def.lower <= def.upper)) {
      throw Error(ErrorCode::kRangeViolation,
                  "empty interval for parameter " + def.name);
    }
    if (def.kind == ParamKind::kInteger &&
        std::ceil(def.lower) > std::floor(def.upper)) {
      throw Error(ErrorCode::kRangeViolation,
                  "integer interval holds no value for parameter " + def.name);
    }
    if (!def.is_numeric() && def.values.empty()) {
      throw Error(ErrorCode::kRangeViolation,
                  "empty value list for parameter " + def.name);
    }
    if (def.condition) {
      for (const auto& clause : def.condition->clauses) {
        if (clause.param == def.name || !seen.contains(clause.param)) {
          throw Error(ErrorCode::kMalformedInput,
                      "condition of " + def.name +
                          " must reference an earlier parameter, got " +
                          clause.param);
        }
      }
    }
  }
}

ParamSpace ParamSpace::parse(std::string_view text) {
  std::vector<ParamDef> params;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::string_view condition_text;
    if (const auto bar = line.find('|'); bar != std::string_view::npos) {
      condition_text = trim(line.substr(bar + 1));
      line = trim(line.substr(0, bar));
    }

    ParamDef def;
    const std::size_t name_end = line.find_first_of(" \t");
    if (name_end == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedInput,
                  "parameter file line " + std::to_string(line_no) +
                      ": expected 'name kind domain'");
    }
    def.name = std::string(line.substr(0, name_end));
    line = trim(line.substr(name_end));
    const std::size_t kind_end = line.find_first_of(" \t(");
    def.kind = parse_kind(line.substr(0, kind_end), line_no);
    std::string_view domain =
        kind_end == std::string_view::npos ? std::string_view{} : trim(line.substr(kind_end));

    if (domain.empty()) {
      if (def.kind != ParamKind::kBoolean) {
        throw Error(ErrorCode::kMalformedInput,
                    "parameter file line " + std::to_string(line_no) +
                        ": missing domain for " + def.name);
      }
      def.values = {"false", "true"};
    } else {
      if (domain.front() != '(' || domain.back() != ')') {
        throw Error(ErrorCode::kMalformedInput,
                    "parameter file line " + std::to_string(line_no) +
                        ": domain must be parenthesized");
      }
      std::vector<std::string> items = split_list(domain.substr(1, domain.size() - 2));
      if (def.is_numeric()) {
        if (items.size() != 2) {
          throw Error(ErrorCode::kMalformedInput,
                      "parameter file line " + std::to_string(line_no) +
                          ": numeric domain needs (lower, upper)");
        }
        const auto lo = parse_number(items[0]);
        const auto hi = parse_number(items[1]);
        if (!lo || !hi) {
          throw Error(ErrorCode::kTypeMismatch,
                      "parameter file line " + std::to_string(line_no) +
                          ": non-numeric bound");
        }
        def.lower = *lo;
        def.upper = *hi;
      } else {
        def.values = std::move(items);
      }
    }

    if (!condition_text.empty()) {
      Condition condition;
      condition.text = std::string(condition_text);
      std::string_view rest = condition_text;
      while (true) {
        const std::size_t amp = rest.find("&&");
        condition.clauses.push_back(parse_clause(rest.substr(0, amp), line_no));
        if (amp == std::string_view::npos) break;
        rest = rest.substr(amp + 2);
      }
      def.condition = std::move(condition);
    }
    params.push_back(std::move(def));
  }
  return ParamSpace(std::move(params));
}

const ParamDef* ParamSpace::find(std::string_view name) const {
  for (const auto& def : params_) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

bool ParamSpace::is_active(const ParamDef& def, const ParamAssignment& partial) const {
  if (!def.condition) return true;
  for (const auto& clause : def.condition->clauses) {
    const ParamDef* ref = find(clause.param);
    if (ref == nullptr || !partial.has(clause.param)) return false;
    if (!clause_holds(clause, *ref, partial.at(clause.param))) return false;
  }
  return true;
}

bool ParamSpace::satisfies(const ParamAssignment& assignment) const {
  for (const auto& [name, value] : assignment.values()) {
    if (find(name) == nullptr) return false;
  }
  for (const auto& def : params_) {
    const bool active = is_active(def, assignment);
    if (active != assignment.has(def.name)) return false;
    if (active && !def.contains(assignment.at(def.name))) return false;
  }
  return true;
}

std::vector<std::string> assignment_to_args(const ParamSpace& space,
                                            const ParamAssignment& assignment) {
  std::vector<std::string> args;
  for (const auto& def : space.params()) {
    if (!assignment.has(def.name)) continue;
    args.push_back("--" + def.name);
    args.push_back(format_param_value(assignment.at(def.name)));
  }
  return args;
}

std::string assignment_to_string(const ParamSpace& space,
                                 const ParamAssignment& assignment) {
  std::ostringstream out;
  bool first = true;
  for (const auto& arg : assignment_to_args(space, assignment)) {
    if (!first) out << ' ';
    out << arg;
    first = false;
  }
  return out.str();
}

}  // namespace evoracer
