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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoracer/build_exec.hpp"

namespace evoracer {

struct TextSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const TextSpan&) const = default;
};

struct FunctionLocator {
  LanguageTag language_tag = LanguageTag::kCFamily;
  std::string function_name;
  std::size_t start_offset = 0;  // first byte of the definition
  std::size_t end_offset = 0;    // one past its last byte
  std::string signature_text;
  std::string body_text;
  TextSpan preamble_span;
  std::vector<TextSpan> globals_spans;
  std::string source_hash;

  std::string definition(std::string_view source) const {
    return std::string(source.substr(start_offset, end_offset - start_offset));
  }
};

struct PluginCapabilities {
  bool find = true;
  bool replace = true;
  bool preamble_extract = true;
};

// Partial parser for one language family. Comments and string literals are
// masked before any structural matching.
class LanguagePlugin {
 public:
  virtual ~LanguagePlugin() = default;

  virtual LanguageTag tag() const = 0;
  virtual PluginCapabilities capabilities() const { return {}; }

  // Exactly one definition must match. With `signature`, candidates are
  // filtered by whitespace-normalized signature equality.
  // Errors: kNotFound, kAmbiguous.
  virtual FunctionLocator find_function(std::string_view source, std::string_view name,
                                        std::optional<std::string> signature = std::nullopt) const = 0;

  // Include/import lines and declarations preceding the first function
  // definition; comment-only lines are dropped.
  virtual std::string extract_preamble(std::string_view source) const = 0;

  // Lines calling `name` outside its own definition, with `radius` lines of
  // surrounding context each.
  virtual std::vector<TextSpan> call_site_spans(std::string_view source,
                                                const FunctionLocator& locator,
                                                std::size_t radius) const = 0;

  // Splices `new_definition` over [start_offset, end_offset). The locator must
  // come from this exact text (kStaleLocator) and the replacement must define
  // the same function (kSignatureMismatch).
  std::string replace_function(std::string_view source, const FunctionLocator& locator,
                               std::string_view new_definition) const;

 protected:
  // Normalizes the replacement text before splicing (trim by default).
  virtual std::string prepare_replacement(std::string_view source,
                                          const FunctionLocator& locator,
                                          std::string_view new_definition) const;
};

class PluginRegistry {
 public:
  void add(std::unique_ptr<LanguagePlugin> plugin);
  const LanguagePlugin* find(LanguageTag tag) const;
  const LanguagePlugin& get(LanguageTag tag) const;

  // Registry with the C-family and script plugins.
  static PluginRegistry with_builtin_plugins();

 private:
  std::map<LanguageTag, std::unique_ptr<LanguagePlugin>> plugins_;
};

std::unique_ptr<LanguagePlugin> make_cfamily_plugin();
std::unique_ptr<LanguagePlugin> make_script_plugin();

// Convenience wrappers over the builtin registry.
FunctionLocator find_function(std::string_view source, std::string_view name, LanguageTag tag);
std::string replace_function(std::string_view source, const FunctionLocator& locator,
                             std::string_view new_definition);
std::string extract_preamble(std::string_view source, LanguageTag tag);

}  // namespace evoracer
