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

#include "evoracer/plugins.hpp"

#include "evoracer/error.hpp"
#include "evoracer/util.hpp"

namespace evoracer {

std::string LanguagePlugin::replace_function(std::string_view source,
                                             const FunctionLocator& locator,
                                             std::string_view new_definition) const {
  if (sha256_hex(source) != locator.source_hash) {
    throw Error(ErrorCode::kStaleLocator,
                "locator for " + locator.function_name + " was not derived from this source");
  }
  if (locator.end_offset > source.size() || locator.start_offset > locator.end_offset) {
    throw Error(ErrorCode::kStaleLocator, "locator offsets outside source");
  }
  const std::string replacement = prepare_replacement(source, locator, new_definition);
  try {
    (void)find_function(replacement, locator.function_name);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSignatureMismatch,
                "replacement does not define exactly one '" + locator.function_name +
                    "' (" + error_code_name(e.code()) + ")");
  }
  std::string out;
  out.reserve(source.size() + replacement.size());
  out.append(source.substr(0, locator.start_offset));
  out.append(replacement);
  out.append(source.substr(locator.end_offset));
  return out;
}

std::string LanguagePlugin::prepare_replacement(std::string_view, const FunctionLocator&,
                                                std::string_view new_definition) const {
  return std::string(trim(new_definition));
}

void PluginRegistry::add(std::unique_ptr<LanguagePlugin> plugin) {
  const LanguageTag tag = plugin->tag();
  const PluginCapabilities caps = plugin->capabilities();
  if (!caps.find || !caps.replace) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("plugin for ") + language_tag_name(tag) + " lacks find/replace");
  }
  plugins_[tag] = std::move(plugin);
}

const LanguagePlugin* PluginRegistry::find(LanguageTag tag) const {
  const auto it = plugins_.find(tag);
  return it == plugins_.end() ? nullptr : it->second.get();
}

const LanguagePlugin& PluginRegistry::get(LanguageTag tag) const {
  const LanguagePlugin* plugin = find(tag);
  if (plugin == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("no plugin for tag ") + language_tag_name(tag));
  }
  return *plugin;
}

PluginRegistry PluginRegistry::with_builtin_plugins() {
  PluginRegistry registry;
  registry.add(make_cfamily_plugin());
  registry.add(make_script_plugin());
  return registry;
}

namespace {
const PluginRegistry& builtin() {
  static const PluginRegistry registry = PluginRegistry::with_builtin_plugins();
  return registry;
}
}  // namespace

FunctionLocator find_function(std::string_view source, std::string_view name, LanguageTag tag) {
  return builtin().get(tag).find_function(source, name);
}

std::string replace_function(std::string_view source, const FunctionLocator& locator,
                             std::string_view new_definition) {
  return builtin().get(locator.language_tag).replace_function(source, locator, new_definition);
}

std::string extract_preamble(std::string_view source, LanguageTag tag) {
  return builtin().get(tag).extract_preamble(source);
}

}  // namespace evoracer
