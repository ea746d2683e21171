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

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace evoracer {

// Append-only JSON-lines sink. Every entry carries "event" and is mirrored in
// memory so tests and reports can inspect a run without touching the disk.
// Entries hold no wall-clock data, so identical runs produce identical logs.
class JsonlLog {
 public:
  JsonlLog() = default;
  explicit JsonlLog(const std::filesystem::path& path);

  void append(const std::string& event, nlohmann::json payload = nlohmann::json::object());

  std::vector<nlohmann::json> entries() const;
  std::size_t count(const std::string& event) const;
  std::string text() const;

 private:
  mutable std::mutex mu_;
  std::ofstream out_;
  std::vector<nlohmann::json> entries_;
};

}  // namespace evoracer
