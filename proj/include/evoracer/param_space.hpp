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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace evoracer {

enum class ParamKind { kReal, kInteger, kCategorical, kBoolean };

const char* param_kind_name(ParamKind kind);

// Real parameters hold double, integer parameters hold int64, categorical and
// boolean parameters hold the chosen label ("true"/"false" for booleans).
using ParamValue = std::variant<double, std::int64_t, std::string>;

std::string format_param_value(const ParamValue& value);

// One clause of a condition: `<param> <op> <operand(s)>`.
struct ConditionClause {
  enum class Op { kEq, kNe, kIn, kLt, kLe, kGt, kGe };
  std::string param;
  Op op = Op::kEq;
  std::vector<std::string> operands;
};

// Conjunction of clauses. Every clause must hold for the parameter to be
// active.
struct Condition {
  std::string text;
  std::vector<ConditionClause> clauses;
};

struct ParamDef {
  std::string name;
  ParamKind kind = ParamKind::kReal;
  double lower = 0.0;
  double upper = 0.0;
  std::vector<std::string> values;  // categorical/boolean labels
  std::optional<Condition> condition;

  bool is_numeric() const {
    return kind == ParamKind::kReal || kind == ParamKind::kInteger;
  }
  bool contains(const ParamValue& value) const;
};

class ParamAssignment {
 public:
  void set(const std::string& name, ParamValue value) {
    values_[name] = std::move(value);
  }
  void erase(const std::string& name) { values_.erase(name); }
  bool has(const std::string& name) const { return values_.contains(name); }
  const ParamValue& at(const std::string& name) const { return values_.at(name); }
  double numeric(const std::string& name) const;
  const std::map<std::string, ParamValue>& values() const { return values_; }
  bool operator==(const ParamAssignment& other) const = default;

 private:
  std::map<std::string, ParamValue> values_;
};

class ParamSpace {
 public:
  ParamSpace() = default;
  explicit ParamSpace(std::vector<ParamDef> params);

  // Format: one parameter per line, `name kind domain [| condition]`.
  //   kind: r|real, i|integer, c|categorical, b|boolean
  //   domain: (lo, hi) for numeric kinds, (a, b, c) for categorical,
  //           optional for boolean.
  //   condition: clauses joined by `&&`; each clause is `p == v`, `p != v`,
  //           `p in (a, b)`, `p %in% c(a, b)`, or a numeric comparison.
  static ParamSpace parse(std::string_view text);

  const std::vector<ParamDef>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  const ParamDef* find(std::string_view name) const;

  bool is_active(const ParamDef& def, const ParamAssignment& partial) const;
  // Domain containment plus conditional closure.
  bool satisfies(const ParamAssignment& assignment) const;

 private:
  void check_invariants() const;
  std::vector<ParamDef> params_;
};

// `--name value` pairs in declaration order, skipping inactive parameters.
std::vector<std::string> assignment_to_args(const ParamSpace& space,
                                            const ParamAssignment& assignment);
std::string assignment_to_string(const ParamSpace& space,
                                 const ParamAssignment& assignment);

}  // namespace evoracer
