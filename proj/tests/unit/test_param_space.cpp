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

#include <gtest/gtest.h>

#include "evoracer/error.hpp"
#include "evoracer/param_space.hpp"

namespace evoracer {
namespace {

const char* kSpace =
    "# comment line\n"
    "ants      i  (5, 100)\n"
    "alpha     r  (0.0, 5.0)\n"
    "local     c  (none, \"2opt\", 3opt)\n"
    "nn        i  (5, 50)   | local in (2opt, 3opt)\n"
    "dlb       b              | local != none && ants > 10\n";

TEST(ParamSpace, ParsesKindsAndDomains) {
  const ParamSpace s = ParamSpace::parse(kSpace);
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s.find("ants")->kind, ParamKind::kInteger);
  EXPECT_EQ(s.find("alpha")->upper, 5.0);
  EXPECT_EQ(s.find("local")->values, (std::vector<std::string>{"none", "2opt", "3opt"}));
  EXPECT_EQ(s.find("dlb")->values, (std::vector<std::string>{"false", "true"}));
  ASSERT_TRUE(s.find("nn")->condition.has_value());
  EXPECT_EQ(s.find("dlb")->condition->clauses.size(), 2u);
}

TEST(ParamSpace, ConditionsDriveActivity) {
  const ParamSpace s = ParamSpace::parse(kSpace);
  ParamAssignment a;
  a.set("ants", std::int64_t{20});
  a.set("alpha", 1.5);
  a.set("local", std::string("none"));
  EXPECT_TRUE(s.satisfies(a));
  EXPECT_FALSE(s.is_active(*s.find("nn"), a));

  a.set("local", std::string("2opt"));
  EXPECT_FALSE(s.satisfies(a));  // nn and dlb now required
  a.set("nn", std::int64_t{10});
  a.set("dlb", std::string("true"));
  EXPECT_TRUE(s.satisfies(a));

  a.set("nn", std::int64_t{99});
  EXPECT_FALSE(s.satisfies(a));
}

TEST(ParamSpace, ArgsSkipInactive) {
  const ParamSpace s = ParamSpace::parse(kSpace);
  ParamAssignment a;
  a.set("ants", std::int64_t{7});
  a.set("alpha", 0.25);
  a.set("local", std::string("none"));
  EXPECT_EQ(assignment_to_args(s, a),
            (std::vector<std::string>{"--ants", "7", "--alpha", "0.25", "--local", "none"}));
  EXPECT_EQ(assignment_to_string(s, a), "--ants 7 --alpha 0.25 --local none");
}

TEST(ParamSpace, Errors) {
  EXPECT_THROW(ParamSpace::parse("x r (1)\n"), Error);
  EXPECT_THROW(ParamSpace::parse("x r (2, 1)\n"), Error);
  EXPECT_THROW(ParamSpace::parse("x q (0, 1)\n"), Error);
  EXPECT_THROW(ParamSpace::parse("x r (0, 1)\nx r (0, 1)\n"), Error);
  EXPECT_THROW(ParamSpace::parse("y r (0, 1) | x == 1\n"), Error);  // unknown reference
}

TEST(ParamSpace, IraceSetSyntax) {
  const ParamSpace s = ParamSpace::parse(
      "mode c (a, b, c)\n"
      "w r (0, 1) | mode %in% c(a, b)\n");
  ParamAssignment a;
  a.set("mode", std::string("c"));
  EXPECT_FALSE(s.is_active(*s.find("w"), a));
  a.set("mode", std::string("b"));
  EXPECT_TRUE(s.is_active(*s.find("w"), a));
}

}  // namespace
}  // namespace evoracer
