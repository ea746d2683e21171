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

#include "evoracer/run_log.hpp"

#include "evoracer/error.hpp"

namespace evoracer {

JsonlLog::JsonlLog(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::out | std::ios::trunc);
  if (!out_) throw Error(ErrorCode::kFatalEnvironment, "cannot write " + path.string());
}

void JsonlLog::append(const std::string& event, nlohmann::json payload) {
  nlohmann::json entry = {{"event", event}};
  for (auto& [key, value] : payload.items()) entry[key] = std::move(value);
  std::lock_guard lock(mu_);
  if (out_.is_open()) {
    out_ << entry.dump() << '\n';
    out_.flush();
  }
  entries_.push_back(std::move(entry));
}

std::vector<nlohmann::json> JsonlLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t JsonlLog::count(const std::string& event) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (e.value("event", "") == event) ++n;
  }
  return n;
}

std::string JsonlLog::text() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& e : entries_) out += e.dump() + '\n';
  return out;
}

}  // namespace evoracer
