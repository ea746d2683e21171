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

#include "evoracer/config.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

#include "evoracer/error.hpp"
#include "evoracer/param_space.hpp"
#include "evoracer/plugins.hpp"
#include "evoracer/racing.hpp"
#include "evoracer/util.hpp"

namespace evoracer {
namespace {

using nlohmann::json;

std::string unquote(std::string_view value) {
  value = trim(value);
  if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
      value.back() == value.front()) {
    value = value.substr(1, value.size() - 2);
  }
  return std::string(value);
}

// Strips a trailing `# comment` that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value) {
  T out{};
  const auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || r.ec != std::errc() || r.ptr != value.data() + value.size()) {
    throw Error(ErrorCode::kTypeMismatch,
                "scenario key " + key + ": expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto r = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || r.ec != std::errc() || r.ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    throw Error(ErrorCode::kTypeMismatch,
                "scenario key " + key + ": expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string lower;
  for (const char c : value) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower.empty() || lower == "false" || lower == "f" || lower == "0" || lower == "no") {
    return false;
  }
  if (lower == "true" || lower == "t" || lower == "1" || lower == "yes") return true;
  throw Error(ErrorCode::kTypeMismatch,
              "scenario key " + key + ": expected TRUE or FALSE, got '" + value + "'");
}

void apply_scenario_key(Scenario& s, const std::string& key, const std::string& value,
                        bool& saw_config_path) {
  const auto path = [&] { return resolve_path(s.base_dir, value); };
  if (key == "maxExperiments") {
    s.max_experiments = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "codeEvolution") {
    s.code_evolution = parse_bool(key, value);
  } else if (key == "codeEvolutionConfig") {
    saw_config_path = !value.empty();
    s.code_evolution_config_path = value.empty() ? std::filesystem::path() : path();
  } else if (key == "codeEvolutionVariants") {
    s.code_evolution_variants = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "parameterFile") {
    s.param_space_path = path();
  } else if (key == "trainInstancesDir") {
    s.instance_dir = path();
  } else if (key == "targetRunner") {
    if (value.empty()) {
      s.target_runner.reset();
    } else {
      s.target_runner = path();
    }
  } else if (key == "runTimeout") {
    s.run_timeout = parse_real(key, value);
  } else if (key == "seed") {
    s.seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "firstTest") {
    s.first_test = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "eachTest") {
    s.each_test = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "eliteCapacity") {
    s.elite_capacity = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "testAlpha") {
    s.alpha = parse_real(key, value);
  } else if (key == "confidence") {
    s.alpha = 1.0 - parse_real(key, value);
  } else if (key == "parallel") {
    s.parallel = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "penalty") {
    s.penalty = parse_real(key, value);
  } else if (key == "smokeInstance") {
    if (value.empty()) {
      s.smoke_instance.reset();
    } else {
      s.smoke_instance = path();
    }
  } else if (key == "nbConfigurations") {
    s.nb_configurations = parse_unsigned<std::uint32_t>(key, value);
  } else {
    s.warnings.push_back("unknown scenario key '" + key + "' ignored");
  }
}

void check_scenario(const Scenario& s, bool saw_config_path) {
  if (s.max_experiments < 1) {
    throw Error(ErrorCode::kRangeViolation, "maxExperiments must be >= 1");
  }
  if (!(s.run_timeout > 0.0)) {
    throw Error(ErrorCode::kRangeViolation, "runTimeout must be > 0");
  }
  if (s.code_evolution) {
    if (!saw_config_path) {
      throw Error(ErrorCode::kMissingKey,
                  "codeEvolutionConfig is required when codeEvolution is TRUE");
    }
    if (s.code_evolution_variants < 1) {
      throw Error(ErrorCode::kRangeViolation,
                  "codeEvolutionVariants must be >= 1 when codeEvolution is TRUE");
    }
  }
  if (s.first_test < 1 || s.each_test < 1 || s.elite_capacity < 1) {
    throw Error(ErrorCode::kRangeViolation,
                "firstTest, eachTest and eliteCapacity must be >= 1");
  }
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) {
    throw Error(ErrorCode::kRangeViolation, "testAlpha must lie in (0, 1)");
  }
}

// JSON accessors that report the dotted path on failure.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const { return node_.contains(key); }

  Reader object(const char* key) const {
    if (!node_.contains(key)) fail(key, "required");
    const json& child = node_.at(key);
    if (!child.is_object()) fail(key, "must be an object");
    return Reader(child, join(key));
  }

  std::string string(const char* key, std::optional<std::string> fallback = std::nullopt) const {
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "required");
    }
    const json& v = node_.at(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "required");
    }
    const json& v = node_.at(key);
    if (!v.is_number()) fail(key, "must be a number");
    return v.get<double>();
  }

  std::uint32_t count(const char* key, std::optional<std::uint32_t> fallback = std::nullopt) const {
    if (!node_.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "required");
    }
    const json& v = node_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(key, "must be a non-negative integer");
    }
    return static_cast<std::uint32_t>(v.get<long long>());
  }

  bool boolean(const char* key, bool fallback) const {
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) fail(key, "must be a boolean");
    return v.get<bool>();
  }

  std::vector<std::string> strings(const char* key) const {
    if (!node_.contains(key)) return {};
    const json& v = node_.at(key);
    if (!v.is_array()) fail(key, "must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : v) {
      if (!item.is_string()) fail(key, "must be an array of strings");
      out.push_back(item.get<std::string>());
    }
    return out;
  }

  std::vector<double> numbers(const char* key) const {
    if (!node_.contains(key)) fail(key, "required");
    const json& v = node_.at(key);
    if (!v.is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number()) fail(key, "must be an array of numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

  [[noreturn]] void fail(const char* key, const std::string& reason) const {
    throw Error(ErrorCode::kSchemaViolation, join(key) + ": " + reason);
  }

 private:
  std::string join(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const json& node_;
  std::string path_;
};

ProblemContext read_problem_context(const Reader& r) {
  ProblemContext c;
  c.problem_name = r.string("problem_name");
  c.problem_description = r.string("problem_description", "");
  c.algorithm_approach = r.string("algorithm_approach", "");
  c.optimization_objective = r.string("optimization_objective", "");
  c.key_challenges = r.strings("key_challenges");
  c.performance_considerations = r.string("performance_considerations", "");
  c.domain_knowledge = r.string("domain_knowledge", "");
  return c;
}

std::vector<std::string> resolve_all(const std::filesystem::path& base,
                                     const std::vector<std::string>& paths) {
  std::vector<std::string> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(resolve_path(base, p).string());
  return out;
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir,
                        const std::vector<std::pair<std::string, std::string>>& overrides) {
  Scenario s;
  s.base_dir = base_dir;
  s.param_space_path = resolve_path(base_dir, s.param_space_path);
  s.instance_dir = resolve_path(base_dir, s.instance_dir);
  bool saw_config_path = false;
  std::size_t line_no = 0;
  for (const std::string& raw : split_lines(text)) {
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kTypeMismatch, "scenario line " + std::to_string(line_no) +
                                                ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value = unquote(line.substr(eq + 1));
    apply_scenario_key(s, key, value, saw_config_path);
  }
  for (const auto& [key, value] : overrides) {
    apply_scenario_key(s, key, unquote(value), saw_config_path);
  }
  check_scenario(s, saw_config_path);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  const std::string text = read_text_file(path);
  Scenario s = parse_scenario(text, path.parent_path(), overrides);
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  return s;
}

CodeEvolutionSpec parse_code_evolution(std::string_view json_text,
                                       const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("(document): ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kSchemaViolation, "(document): must be an object");
  }
  const Reader root(doc, "");
  CodeEvolutionSpec spec;
  spec.base_dir = base_dir;

  spec.problem_context = read_problem_context(root.object("problem_context"));

  const Reader source = root.object("source_config");
  std::string language = "cpp";
  if (root.has("language_config")) {
    language = root.object("language_config").string("language", "cpp");
  }
  const auto tag = language_tag_from_string(language);
  if (!tag) root.fail("language_config", "unsupported language '" + language + "'");
  spec.source.language = language;
  spec.source.language_tag = *tag;
  spec.source.source_file = resolve_path(base_dir, source.string("source_file"));
  spec.source.function_name = source.string("function_name");
  spec.source.function_signature = source.string("function_signature", "");
  spec.source.includes = source.strings("includes");
  spec.source.dependencies = source.strings("dependencies");

  // build_config is keyed by language ("cpp", "python", ...); fall back to a
  // flat block.
  const Reader build_block = root.object("build_config");
  const Reader build = build_block.has(language.c_str()) ? build_block.object(language.c_str())
                                                         : build_block;
  spec.build.language_tag = *tag;
  spec.build.compiler =
      build.string("compiler", *tag == LanguageTag::kScript ? "python3" : "g++");
  spec.build.flags = build.strings("flags");
  spec.build.link_flags = build.strings("link_flags");
  spec.build.include_paths = resolve_all(base_dir, build.strings("include_paths"));
  spec.build.library_paths = resolve_all(base_dir, build.strings("library_paths"));
  spec.build.libraries = build.strings("libraries");
  spec.build.output_dir = resolve_path(base_dir, build.string("output_dir", "./bin"));
  spec.build.compile_timeout = build.number("compile_timeout", 30.0);

  const Reader llm = root.object("llm_config");
  spec.llm.provider_name = llm.string("api_provider", "mock");
  spec.llm.provider =
      spec.llm.provider_name == "mock" ? ProviderKind::kMock : ProviderKind::kHttpGeneric;
  spec.llm.model = llm.string("model", "");
  spec.llm.temperature = llm.number("temperature", 1.0);
  spec.llm.top_p = llm.number("top_p", 0.9);
  spec.llm.max_tokens = llm.count("max_tokens", 2000);
  spec.llm.max_retries = llm.count("max_retries", 3);
  spec.llm.timeout = llm.number("timeout", 60.0);
  spec.llm.endpoint = llm.string("endpoint", "");
  spec.llm.api_key_env = llm.string("api_key_env", "EVORACER_API_KEY");
  const std::string script = llm.string("mock_script", "");
  if (!script.empty()) spec.llm.mock_script = resolve_path(base_dir, script);
  spec.llm.backoff_seconds = llm.number("backoff_seconds", 1.0);
  spec.llm.use_dynamic_prompting = llm.boolean("use_dynamic_prompting", true);

  const Reader ctx = root.object("progressive_context");
  spec.progressive_context.enabled = ctx.boolean("enabled", true);
  spec.progressive_context.first_iteration_full_context =
      ctx.boolean("first_iteration_full_context", true);
  spec.progressive_context.reduction_schedule = ctx.numbers("reduction_schedule");
  spec.progressive_context.min_context_ratio = ctx.number("min_context_ratio", 0.2);

  const Reader evo = root.object("evolution_config");
  spec.evolution.max_compilation_failures = evo.count("max_compilation_failures", 3);
  spec.evolution.ef_threshold = evo.count("ef_threshold", 3);
  spec.evolution.intelligent_error_correction = evo.boolean("intelligent_error_correction", true);
  spec.evolution.max_error_correction_attempts = evo.count("max_error_correction_attempts", 2);
  spec.evolution.available_strategies = evo.strings("available_strategies");
  spec.evolution.strategy_selection = evo.string("strategy_selection", "weighted");
  if (evo.has("strategy_weights")) {
    const Reader weights = evo.object("strategy_weights");
    for (const auto& [name, value] : weights.node().items()) {
      if (!value.is_number()) weights.fail(name.c_str(), "must be a number");
      spec.evolution.strategy_weights[name] = value.get<double>();
    }
  }
  if (spec.evolution.strategy_weights.empty()) {
    for (const auto& name : spec.evolution.available_strategies) {
      spec.evolution.strategy_weights[name] = 1.0;
    }
  }
  if (spec.evolution.strategy_weights.empty() && !evo.has("strategy_weights")) {
    spec.evolution.strategy_weights["innovate_heuristic_design"] = 1.0;
  }

  spec.document = std::move(doc);
  return spec;
}

CodeEvolutionSpec load_code_evolution(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kFileNotFound, "code-evolution config not found: " + path.string());
  }
  CodeEvolutionSpec spec = parse_code_evolution(read_text_file(path), path.parent_path());
  if (!std::filesystem::exists(spec.source.source_file)) {
    throw Error(ErrorCode::kFileNotFound,
                "source_config.source_file not found: " + spec.source.source_file.string());
  }
  return spec;
}

nlohmann::json to_json(const ProblemContext& c) {
  return json{{"problem_name", c.problem_name},
              {"problem_description", c.problem_description},
              {"algorithm_approach", c.algorithm_approach},
              {"optimization_objective", c.optimization_objective},
              {"key_challenges", c.key_challenges},
              {"performance_considerations", c.performance_considerations},
              {"domain_knowledge", c.domain_knowledge}};
}

nlohmann::json to_json(const CodeEvolutionSpec& spec) {
  json doc = spec.document;
  json& pc = doc["problem_context"];
  const json context = to_json(spec.problem_context);
  for (const auto& [key, value] : context.items()) pc[key] = value;

  json& src = doc["source_config"];
  src["function_name"] = spec.source.function_name;
  src["function_signature"] = spec.source.function_signature;
  src["includes"] = spec.source.includes;
  src["dependencies"] = spec.source.dependencies;
  if (spec.base_dir.empty()) src["source_file"] = spec.source.source_file.string();

  json& ctx = doc["progressive_context"];
  ctx["enabled"] = spec.progressive_context.enabled;
  ctx["first_iteration_full_context"] = spec.progressive_context.first_iteration_full_context;
  ctx["reduction_schedule"] = spec.progressive_context.reduction_schedule;
  ctx["min_context_ratio"] = spec.progressive_context.min_context_ratio;

  json& evo = doc["evolution_config"];
  evo["max_compilation_failures"] = spec.evolution.max_compilation_failures;
  evo["intelligent_error_correction"] = spec.evolution.intelligent_error_correction;
  evo["max_error_correction_attempts"] = spec.evolution.max_error_correction_attempts;
  evo["strategy_weights"] = spec.evolution.strategy_weights;
  if (doc["evolution_config"].contains("ef_threshold") || spec.evolution.ef_threshold != 3) {
    evo["ef_threshold"] = spec.evolution.ef_threshold;
  }

  json& llm = doc["llm_config"];
  llm["temperature"] = spec.llm.temperature;
  llm["max_tokens"] = spec.llm.max_tokens;
  llm["max_retries"] = spec.llm.max_retries;
  if (llm.contains("top_p") || spec.llm.top_p != 0.9) llm["top_p"] = spec.llm.top_p;
  return doc;
}

bool ValidationReport::has_errors() const { return error_count() > 0; }

std::size_t ValidationReport::error_count() const {
  std::size_t n = 0;
  for (const auto& issue : issues) n += issue.severity == Severity::kError ? 1 : 0;
  return n;
}

std::string ValidationReport::to_text() const {
  if (issues.empty()) return "ok: no issues\n";
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << (issue.severity == Severity::kError ? "error" : "warning") << ": "
        << (issue.field.empty() ? "" : issue.field + ": ") << issue.message << '\n';
  }
  return out.str();
}

ValidationReport validate_specs(const Scenario& scenario, const CodeEvolutionSpec* ces,
                                const PluginRegistry& plugins, const ParamSpace* space) {
  ValidationReport report;
  auto error = [&](std::string field, std::string message) {
    report.issues.push_back({Severity::kError, std::move(field), std::move(message)});
  };
  auto warn = [&](std::string field, std::string message) {
    report.issues.push_back({Severity::kWarning, std::move(field), std::move(message)});
  };

  for (const auto& w : scenario.warnings) warn("scenario", w);
  if (scenario.max_experiments < 1) error("maxExperiments", "must be >= 1");
  if (!(scenario.run_timeout > 0.0)) error("runTimeout", "must be > 0");
  if (scenario.code_evolution && scenario.code_evolution_variants < 1) {
    error("codeEvolutionVariants", "must be >= 1");
  }
  if (scenario.code_evolution && ces == nullptr) {
    error("codeEvolutionConfig", "code evolution enabled but no configuration loaded");
  }
  if (!scenario.code_evolution && !scenario.target_runner && ces == nullptr) {
    error("targetRunner", "no target: set targetRunner or provide codeEvolutionConfig");
  }

  // Round 1 must be affordable: every initial candidate sees first_test
  // instances before the first elimination test.
  const std::size_t n_params = space != nullptr ? space->size() : 1;
  const std::uint64_t initial =
      initial_candidate_count(scenario, n_params, scenario.max_experiments);
  if (scenario.max_experiments < static_cast<std::uint64_t>(scenario.first_test) * initial) {
    error("maxExperiments", "budget cannot complete first race step (" +
                                std::to_string(initial) + " candidates x " +
                                std::to_string(scenario.first_test) + " instances > " +
                                std::to_string(scenario.max_experiments) + ")");
  }

  if (ces != nullptr) {
    const auto& pc = ces->problem_context;
    if (pc.problem_name.empty()) error("problem_context.problem_name", "must be non-empty");

    const auto& src = ces->source;
    if (src.function_name.empty()) error("source_config.function_name", "must be non-empty");
    if (!src.function_signature.empty() &&
        src.function_signature.find(src.function_name) == std::string::npos) {
      error("source_config.function_signature", "does not mention function_name");
    }
    if (plugins.find(src.language_tag) == nullptr) {
      error("language_config.language",
            std::string("no plugin for tag ") + language_tag_name(src.language_tag));
    }
    if (!std::filesystem::exists(src.source_file)) {
      error("source_config.source_file", "not found: " + src.source_file.string());
    } else if (const LanguagePlugin* plugin = plugins.find(src.language_tag)) {
      try {
        const std::string text = read_text_file(src.source_file);
        (void)plugin->find_function(text, src.function_name,
                                    src.function_signature.empty()
                                        ? std::nullopt
                                        : std::optional<std::string>(src.function_signature));
      } catch (const Error& e) {
        error("source_config.function_name", std::string(error_code_name(e.code())) + ": " +
                                                 e.what());
      }
    }

    const auto& llm = ces->llm;
    if (!(llm.temperature >= 0.0 && llm.temperature <= 2.0)) {
      error("llm_config.temperature", "must lie in [0, 2]");
    }
    if (!(llm.top_p > 0.0 && llm.top_p <= 1.0)) error("llm_config.top_p", "must lie in (0, 1]");
    if (llm.max_tokens < 1) error("llm_config.max_tokens", "must be >= 1");
    if (llm.provider == ProviderKind::kMock && llm.mock_script.empty()) {
      error("llm_config.mock_script", "mock provider needs a script");
    }
    if (llm.provider == ProviderKind::kHttpGeneric && llm.endpoint.empty()) {
      error("llm_config.endpoint", "http provider '" + llm.provider_name + "' needs an endpoint");
    }

    const auto& ctx = ces->progressive_context;
    if (ctx.reduction_schedule.empty()) {
      error("progressive_context.reduction_schedule", "must be non-empty");
    }
    for (const double r : ctx.reduction_schedule) {
      if (!(r > 0.0 && r <= 1.0)) {
        error("progressive_context.reduction_schedule", "entries must lie in (0, 1]");
        break;
      }
    }
    if (ctx.first_iteration_full_context && !ctx.reduction_schedule.empty() &&
        ctx.reduction_schedule.front() != 1.0) {
      error("progressive_context.reduction_schedule",
            "first entry must be 1.0 with first_iteration_full_context");
    }
    if (!(ctx.min_context_ratio > 0.0 && ctx.min_context_ratio <= 1.0)) {
      error("progressive_context.min_context_ratio", "must lie in (0, 1]");
    }
    for (const double r : ctx.reduction_schedule) {
      if (r < ctx.min_context_ratio) {
        warn("progressive_context.reduction_schedule",
             "entry below min_context_ratio is clamped at use");
        break;
      }
    }

    const auto& evo = ces->evolution;
    if (evo.max_compilation_failures < 1) {
      error("evolution_config.max_compilation_failures", "must be >= 1");
    }
    if (evo.ef_threshold < 1) error("evolution_config.ef_threshold", "must be >= 1");
    double weight_sum = 0.0;
    for (const auto& [name, w] : evo.strategy_weights) {
      if (w < 0.0) error("evolution_config.strategy_weights." + name, "must be >= 0");
      weight_sum += w;
    }
    if (!(weight_sum > 0.0)) error("evolution_config.strategy_weights", "must sum to > 0");

    if (!(ces->build.compile_timeout > 0.0)) {
      error("build_config.compile_timeout", "must be > 0");
    }
  }
  return report;
}

}  // namespace evoracer
