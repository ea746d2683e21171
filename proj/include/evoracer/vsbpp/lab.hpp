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
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "evoracer/vsbpp/vsbpp.hpp"

namespace evoracer::vsbpp {

// Writes `count` instances per size into out_dir as
// `<class>_n<size>_<index>.txt` plus `manifest.json`, and returns the
// manifest. Each file has its own seed drawn from `seed`, so the set is
// reproducible file by file.
nlohmann::json write_instance_set(CostClass c, const std::vector<int>& sizes, unsigned count,
                                  std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace evoracer::vsbpp
