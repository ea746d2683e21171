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
#include <string>
#include <string_view>
#include <vector>

namespace evoracer {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string> split_lines(std::string_view text);
bool starts_with_word(std::string_view text, std::string_view word);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

// Shortest round-trippable decimal representation.
std::string format_double(double value);

// Collapses every run of whitespace to a single space and trims the ends.
std::string normalize_whitespace(std::string_view text);

// Resolves `path` against `base` unless it is already absolute.
std::filesystem::path resolve_path(const std::filesystem::path& base,
                                   const std::filesystem::path& path);

}  // namespace evoracer
