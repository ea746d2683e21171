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

// Exercises the shared library through its C interface only.
#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "evoracer/evoracer.h"

namespace {

namespace fs = std::filesystem;

struct Str {
  char* p = nullptr;
  ~Str() { evo_string_free(p); }
  std::string str() const { return p != nullptr ? p : ""; }
};

class Scratch {
 public:
  Scratch() {
    path_ = fs::temp_directory_path() / ("evo-capi-" + std::to_string(::getpid()) + "-" +
                                         std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  void write(const std::string& name, const std::string& text) const {
    fs::create_directories((path_ / name).parent_path());
    std::ofstream(path_ / name) << text;
  }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

// Plain racing over the prebuilt quadratic target.
std::string plain_scenario(const Scratch& dir, int budget) {
  dir.write("parameters.txt", "x r (-10, 10)\n");
  for (int i = 0; i < 6; ++i) dir.write("Instances/i" + std::to_string(i) + ".txt", "q\n");
  dir.write("scenario.txt", "maxExperiments = " + std::to_string(budget) +
                                "\ntargetRunner = " EVORACER_QUADRATIC_TARGET "\nseed = 3\n");
  return (dir / "scenario.txt").string();
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_NE(std::strlen(evo_version()), 0u);
  EXPECT_STREQ(evo_status_name(EVO_OK), "Ok");
  EXPECT_STREQ(evo_status_name(EVO_E_VALIDATION_FAILED), "ValidationFailed");
  evo_string_free(nullptr);
}

TEST(CApi, NullArguments) {
  evo_session* s = nullptr;
  EXPECT_EQ(evo_session_open(nullptr, &s), EVO_E_NULL_ARGUMENT);
  EXPECT_EQ(evo_session_open("x", nullptr), EVO_E_NULL_ARGUMENT);
  EXPECT_EQ(evo_session_tune(nullptr), EVO_E_NULL_ARGUMENT);
  EXPECT_EQ(evo_report(nullptr, nullptr, 0, nullptr, nullptr, nullptr), EVO_E_NULL_ARGUMENT);
  evo_session_close(nullptr);
}

TEST(CApi, SessionLifecycle) {
  Scratch dir;
  evo_session* s = nullptr;
  ASSERT_EQ(evo_session_open(plain_scenario(dir, 120).c_str(), &s), EVO_OK);
  Str report;
  size_t errors = 99;
  EXPECT_EQ(evo_session_validate(s, &report.p, &errors), EVO_OK);
  EXPECT_EQ(errors, 0u);
  Str none;
  EXPECT_NE(evo_session_winner_line(s, &none.p), EVO_OK);  // not tuned yet
  ASSERT_EQ(evo_session_set_output(s, (dir / "out").c_str()), EVO_OK);
  ASSERT_EQ(evo_session_tune(s), EVO_OK) << evo_session_last_error(s);
  Str line;
  ASSERT_EQ(evo_session_winner_line(s, &line.p), EVO_OK);
  EXPECT_EQ(line.str().rfind("--x ", 0), 0u);
  Str json;
  ASSERT_EQ(evo_session_report_json(s, &json.p), EVO_OK);
  EXPECT_NE(json.str().find("experiments_used"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "winner.txt"));
  evo_session_close(s);
}

TEST(CApi, ValidationFailureIsReported) {
  Scratch dir;
  evo_session* s = nullptr;
  ASSERT_EQ(evo_session_open(plain_scenario(dir, 120).c_str(), &s), EVO_OK);
  ASSERT_EQ(evo_session_set(s, "maxExperiments", "2"), EVO_OK);
  Str report;
  size_t errors = 0;
  EXPECT_EQ(evo_session_validate(s, &report.p, &errors), EVO_E_VALIDATION_FAILED);
  EXPECT_GE(errors, 1u);
  EXPECT_FALSE(report.str().empty());
  EXPECT_EQ(evo_session_tune(s), EVO_E_VALIDATION_FAILED);
  EXPECT_STRNE(evo_session_last_error(s), "");
  evo_session_close(s);
}

TEST(CApi, GenerateInstances) {
  Scratch dir;
  const int sizes[] = {10, 20};
  Str manifest;
  Str error;
  ASSERT_EQ(evo_generate_instances("B2", sizes, 2, 3, 11, (dir / "set").c_str(), &manifest.p,
                                   &error.p),
            EVO_OK)
      << error.str();
  EXPECT_NE(manifest.str().find("B2_n20_03.txt"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "set" / "B2_n10_01.txt"));
  Str bad;
  EXPECT_EQ(evo_generate_instances("B7", sizes, 2, 1, 1, (dir / "x").c_str(), nullptr, &bad.p),
            EVO_E_INVALID_ARGUMENT);
  EXPECT_NE(bad.str().find("B7"), std::string::npos);
}

TEST(CApi, Reports) {
  Scratch dir;
  dir.write("empty.jsonl", "");
  const std::string path = (dir / "empty.jsonl").string();
  const char* paths[] = {path.c_str()};
  Str out;
  ASSERT_EQ(evo_report("cost", paths, 1, nullptr, &out.p, nullptr), EVO_OK);
  EXPECT_NE(out.str().find("\"calls\": 0"), std::string::npos);
  Str err;
  EXPECT_EQ(evo_report("nope", paths, 1, nullptr, nullptr, &err.p), EVO_E_INVALID_ARGUMENT);
  Str err2;
  EXPECT_EQ(evo_report("cost", paths, 1, "{bad", nullptr, &err2.p), EVO_E_INVALID_ARGUMENT);
  Str err3;
  EXPECT_EQ(evo_report("winrate", paths, 1, nullptr, nullptr, &err3.p), EVO_E_INVALID_ARGUMENT);
}

}  // namespace
