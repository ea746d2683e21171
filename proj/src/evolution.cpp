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

#include "evoracer/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "evoracer/error.hpp"
#include "evoracer/llm.hpp"
#include "evoracer/racing.hpp"
#include "evoracer/run_log.hpp"
#include "evoracer/util.hpp"

namespace evoracer {

const char* variant_status_name(VariantStatus status) {
  switch (status) {
    case VariantStatus::kOriginal: return "Original";
    case VariantStatus::kUnvalidated: return "Unvalidated";
    case VariantStatus::kValid: return "Valid";
    case VariantStatus::kCompileFailed: return "CompileFailed";
    case VariantStatus::kRuntimePenalized: return "RuntimePenalized";
    case VariantStatus::kDuplicate: return "Duplicate";
  }
  return "?";
}

const VariantRecord& VariantRegistry::add(VariantRecord record) {
  if (index_.contains(record.id)) {
    throw Error(ErrorCode::kInvalidArgument, "variant id reused: " + record.id);
  }
  index_[record.id] = records_.size();
  records_.push_back(std::move(record));
  return records_.back();
}

const VariantRecord& VariantRegistry::get(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::kNotFound, "unknown variant " + id);
  return records_[it->second];
}

VariantRecord& VariantRegistry::mutable_get(const std::string& id) {
  const auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::kNotFound, "unknown variant " + id);
  return records_[it->second];
}

std::optional<std::string> VariantRegistry::find_equivalent(const std::string& function_text) const {
  const std::string key = normalize_whitespace(function_text);
  for (const auto& r : records_) {
    if (r.status == VariantStatus::kDuplicate || r.status == VariantStatus::kCompileFailed ||
        r.function_text.empty()) {
      continue;
    }
    if (normalize_whitespace(r.function_text) == key) return r.id;
  }
  return std::nullopt;
}

const char* focus_name(EvolutionFocus focus) {
  return focus == EvolutionFocus::kStandard ? "std" : "aggressive";
}

EvolutionFocus evolution_focus(std::uint32_t iteration, std::uint32_t ef_threshold) {
  if (iteration < 1) throw Error(ErrorCode::kInvalidArgument, "iterations start at 1");
  return iteration >= ef_threshold ? EvolutionFocus::kAggressive : EvolutionFocus::kStandard;
}

double context_ratio(std::uint32_t iteration, const ContextSpec& spec) {
  if (iteration < 1) throw Error(ErrorCode::kInvalidArgument, "iterations start at 1");
  if (!spec.enabled || spec.reduction_schedule.empty()) return 1.0;
  const auto& s = spec.reduction_schedule;
  auto entry = [&](std::uint32_t i) {
    const std::size_t idx = std::min<std::size_t>(i, s.size()) - 1;
    return std::min(1.0, std::max(s[idx], spec.min_context_ratio));
  };
  double r = spec.first_iteration_full_context ? 1.0 : entry(1);
  for (std::uint32_t i = 2; i <= iteration; ++i) r = std::min(r, entry(i));
  return r;
}

ContextWindow context_window(std::uint32_t iteration, const std::string& full_source,
                             const ContextSpec& spec, const LanguagePlugin& plugin,
                             const std::optional<FunctionLocator>& locator) {
  ContextWindow w;
  w.full_size = full_source.size();
  w.ratio = context_ratio(iteration, spec);
  w.limit = static_cast<std::size_t>(std::floor(w.ratio * static_cast<double>(full_source.size())));
  if (w.ratio >= 1.0) {
    w.text = full_source;
    w.limit = full_source.size();
    return w;
  }
  if (!locator || locator->source_hash != sha256_hex(full_source)) {
    w.text = full_source;
    w.fallback = true;
    return w;
  }

  std::vector<std::string> pieces;
  pieces.push_back(plugin.extract_preamble(full_source));
  const TextSpan fn{locator->start_offset, locator->end_offset};
  auto outside = [&](const TextSpan& s) {
    return s.end <= locator->preamble_span.end ? false : (s.end <= fn.begin || s.begin >= fn.end);
  };
  std::string globals;
  for (const auto& s : locator->globals_spans) {
    if (!outside(s)) continue;
    globals.append(full_source, s.begin, s.size());
    globals.push_back('\n');
  }
  pieces.push_back(std::move(globals));
  std::string calls;
  for (const auto& s : plugin.call_site_spans(full_source, *locator, 2)) {
    calls.append(full_source, s.begin, s.size());
    if (!calls.empty() && calls.back() != '\n') calls.push_back('\n');
  }
  pieces.push_back(std::move(calls));

  // Whole lines only, in piece order, until the limit is reached.
  for (const auto& piece : pieces) {
    bool full = false;
    for (const auto& line : split_lines(piece)) {
      if (w.text.size() + line.size() + 1 > w.limit) {
        full = true;
        break;
      }
      w.text += line;
      w.text.push_back('\n');
    }
    if (full) break;
  }
  return w;
}

namespace {

std::string strategy_description(const std::string& strategy) {
  if (strategy == "innovate_heuristic_design") {
    return "Design an improved heuristic rule. Use the problem knowledge above to score "
           "decisions better than the current function does.";
  }
  if (strategy == "refine_parameters") {
    return "Keep the structure and refine constants, weights and guards.";
  }
  return "Apply this strategy to the function below.";
}

void append_section(std::string& out, std::string_view heading, std::string_view body) {
  out += "## ";
  out += heading;
  out += "\n";
  out += body;
  if (!body.empty() && body.back() != '\n') out += "\n";
  out += "\n";
}

std::string fenced(std::string_view lang, std::string_view text) {
  std::string out = "```";
  out += lang;
  out += "\n";
  out += text;
  if (!text.empty() && text.back() != '\n') out += "\n";
  out += "```\n";
  return out;
}

}  // namespace

RenderedPrompt build_prompt(const PromptSpec& spec) {
  RenderedPrompt p;
  p.system_text =
      "You improve one function of an optimization algorithm. Answer with a single fenced "
      "code block that contains the complete new definition of the function.";

  const auto& pc = spec.problem_context;
  std::string context;
  auto line = [&](std::string_view label, const std::string& value) {
    if (value.empty()) return;
    context += label;
    context += ": ";
    context += value;
    context += "\n";
  };
  line("Problem", pc.problem_name);
  line("Description", pc.problem_description);
  line("Algorithm", pc.algorithm_approach);
  line("Objective", pc.optimization_objective);
  if (!pc.key_challenges.empty()) {
    context += "Key challenges:\n";
    for (const auto& c : pc.key_challenges) context += "- " + c + "\n";
  }
  line("Performance considerations", pc.performance_considerations);
  line("Domain knowledge", pc.domain_knowledge);

  std::string& u = p.user_text;
  append_section(u, "Problem context", context);
  append_section(u, "Evolution focus",
                 "Iteration " + std::to_string(spec.iteration) + ". " +
                     (spec.focus == EvolutionFocus::kStandard
                          ? "Make moderate changes preserving the overall logic of the function."
                          : "Make broader structural changes; the scoring logic may be "
                            "redesigned from scratch."));
  append_section(u, "Strategy",
                 (spec.strategy.empty() ? std::string("default") : spec.strategy) + ": " +
                     strategy_description(spec.strategy));
  append_section(u, "Code context", fenced(spec.fence_language, spec.context_fragment));
  u += kOriginalFunctionHeading;
  u += "\n";
  u += fenced(spec.fence_language, spec.fc);
  u += "\n";
  if (!spec.diagnostics.empty() || !spec.failed_attempt.empty()) {
    std::string body;
    if (!spec.failed_attempt.empty()) {
      body += "Your previous answer:\n" + fenced(spec.fence_language, spec.failed_attempt);
    }
    if (!spec.diagnostics.empty()) body += "It failed with:\n" + fenced("", spec.diagnostics);
    body += "Fix the problem and answer again.\n";
    append_section(u, "Previous attempt", body);
  }
  const std::string signature =
      spec.function_signature.empty() ? spec.function_name : spec.function_signature;
  append_section(u, "Output format",
                 "Return the complete definition of `" + spec.function_name +
                     "` in exactly one fenced ```" + spec.fence_language +
                     " code block. Keep the signature identical:\n" + signature +
                     "\nDo not put anything else in the block.");
  return p;
}

std::optional<std::string> extract_fc_section(const std::string& prompt_text) {
  const std::string heading = std::string(kOriginalFunctionHeading) + "\n```";
  const std::size_t at = prompt_text.find(heading);
  if (at == std::string::npos) return std::nullopt;
  const std::size_t open_end = prompt_text.find('\n', at + heading.size());
  if (open_end == std::string::npos) return std::nullopt;
  const std::size_t close = prompt_text.find("\n```\n", open_end);
  if (close == std::string::npos) return std::nullopt;
  return prompt_text.substr(open_end + 1, close + 1 - (open_end + 1));
}

EvolutionEngine::EvolutionEngine(const CodeEvolutionSpec& spec, const LanguagePlugin& plugin,
                                 LlmProvider& llm, VariantRegistry& registry,
                                 std::string original_source, JsonlLog* run_log,
                                 JsonlLog* transcript, std::uint64_t seed)
    : spec_(spec),
      plugin_(plugin),
      llm_(llm),
      registry_(registry),
      source_(std::move(original_source)),
      run_log_(run_log),
      transcript_(transcript),
      rng_(seed) {
  locator_ = plugin_.find_function(source_, spec_.source.function_name,
                                   spec_.source.function_signature.empty()
                                       ? std::nullopt
                                       : std::optional<std::string>(spec_.source.function_signature));
  fc_ = locator_.definition(source_);
}

const VariantRecord& EvolutionEngine::prepare_original() {
  if (registry_.contains(kOriginalVariantId)) return registry_.get(kOriginalVariantId);
  VariantRecord r;
  r.id = kOriginalVariantId;
  r.iteration = 0;
  r.source_text = source_;
  r.function_text = fc_;
  r.status = VariantStatus::kOriginal;
  const CompileOutcome out = compile_variant(spec_.build, source_, r.id);
  r.attempts = 1;
  if (!out.ok) {
    throw Error(ErrorCode::kFatalEnvironment,
                "original source does not build:\n" + out.diagnostics.substr(0, 4000));
  }
  r.artifact = out.artifact;
  if (run_log_ != nullptr) run_log_->append("original", {{"variant", r.id}, {"hash", out.hash}});
  return registry_.add(std::move(r));
}

ContextWindow EvolutionEngine::window(std::uint32_t iteration) const {
  return context_window(iteration, source_, spec_.progressive_context, plugin_, locator_);
}

std::string EvolutionEngine::pick_strategy() {
  const auto& weights = spec_.evolution.strategy_weights;
  if (weights.empty()) return "innovate_heuristic_design";
  std::vector<std::string> names;
  std::vector<double> w;
  for (const auto& [name, weight] : weights) {
    names.push_back(name);
    w.push_back(weight);
  }
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return names[pick(rng_)];
}

PromptSpec EvolutionEngine::prompt_spec(std::uint32_t iteration) const {
  PromptSpec p;
  p.iteration = iteration;
  p.fc = fc_;
  p.focus = evolution_focus(iteration, spec_.evolution.ef_threshold);
  p.context_fragment = window(iteration).text;
  p.problem_context = spec_.problem_context;
  p.temperature = spec_.llm.temperature;
  p.top_p = spec_.llm.top_p;
  p.function_name = spec_.source.function_name;
  p.function_signature = spec_.source.function_signature;
  p.fence_language = spec_.source.language_tag == LanguageTag::kScript ? "python" : "cpp";
  return p;
}

EvolutionEngine::Completion EvolutionEngine::ask(std::uint32_t iteration,
                                                 const std::string& variant_id,
                                                 const std::string& purpose,
                                                 const PromptSpec& prompt) {
  const RenderedPrompt rendered = build_prompt(prompt);
  LlmRequest req;
  req.model = spec_.llm.model;
  req.system_text = rendered.system_text;
  req.user_text = rendered.user_text;
  req.temperature = spec_.llm.temperature;
  req.top_p = spec_.llm.top_p;
  req.max_tokens = spec_.llm.max_tokens;
  req.request_id = "r" + std::to_string(++request_counter_);

  nlohmann::json base = {{"iteration", iteration},
                         {"variant", variant_id},
                         {"purpose", purpose},
                         {"request_id", req.request_id}};
  try {
    const LlmResponse resp =
        complete(llm_, req, {spec_.llm.max_retries, spec_.llm.backoff_seconds}, transcript_);
    if (transcript_ != nullptr) {
      nlohmann::json e = base;
      e["model"] = req.model;
      e["focus"] = focus_name(prompt.focus);
      e["strategy"] = prompt.strategy;
      e["temperature"] = req.temperature;
      e["top_p"] = req.top_p;
      e["prompt_sha256"] = sha256_hex(req.user_text);
      e["system"] = req.system_text;
      e["prompt"] = req.user_text;
      e["prompt_chars"] = req.user_text.size();
      e["context_chars"] = prompt.context_fragment.size();
      e["full_chars"] = source_.size();
      e["response"] = resp.text;
      e["prompt_tokens"] = resp.prompt_tokens;
      e["completion_tokens"] = resp.completion_tokens;
      e["attempt"] = resp.attempt;
      transcript_->append("llm_response", std::move(e));
    }
    if (registry_.contains(variant_id)) {
      auto& rec = registry_.mutable_get(variant_id);
      rec.prompt_tokens += resp.prompt_tokens;
      rec.completion_tokens += resp.completion_tokens;
    } else {
      pending_tokens_ = {resp.prompt_tokens, resp.completion_tokens};
    }
    return {true, resp.text};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProviderFailure && e.code() != ErrorCode::kAuthFailure) throw;
    nlohmann::json f = base;
    f["error"] = error_code_name(e.code());
    f["message"] = e.what();
    if (transcript_ != nullptr) transcript_->append("provider_failure", f);
    if (run_log_ != nullptr) run_log_->append("provider_failure", f);
    return {false, {}};
  }
}

std::optional<std::string> EvolutionEngine::absorb(VariantRecord& record,
                                                   const std::string& response) {
  try {
    const std::string code = extract_code_block(response, spec_.source.function_name);
    std::string spliced = plugin_.replace_function(source_, locator_, code);
    const FunctionLocator loc = plugin_.find_function(spliced, spec_.source.function_name);
    record.function_text = loc.definition(spliced);
    record.source_text = std::move(spliced);
    return std::nullopt;
  } catch (const Error& e) {
    record.source_text.clear();
    record.function_text.clear();
    return std::string(error_code_name(e.code())) + ": " + e.what();
  }
}

void EvolutionEngine::log_variant(const VariantRecord& r) {
  if (run_log_ == nullptr) return;
  nlohmann::json e = {{"iteration", r.iteration},
                      {"variant", r.id},
                      {"status", variant_status_name(r.status)},
                      {"attempts", r.attempts},
                      {"prompt_tokens", r.prompt_tokens},
                      {"completion_tokens", r.completion_tokens}};
  if (r.duplicate_of) e["duplicate_of"] = *r.duplicate_of;
  if (r.artifact) e["hash"] = r.artifact->hash;
  run_log_->append("variant", std::move(e));
}

std::vector<std::string> EvolutionEngine::generate(std::uint32_t iteration, std::uint32_t n) {
  const ContextWindow w = window(iteration);
  if (run_log_ != nullptr) {
    run_log_->append("evolution_start", {{"iteration", iteration},
                                         {"requested", n},
                                         {"focus", focus_name(evolution_focus(
                                                       iteration, spec_.evolution.ef_threshold))},
                                         {"context_ratio", w.ratio},
                                         {"context_chars", w.text.size()},
                                         {"context_limit", w.limit},
                                         {"full_chars", w.full_size},
                                         {"fallback", w.fallback}});
    if (w.fallback) {
      run_log_->append("warning", {{"iteration", iteration},
                                   {"message", "context locator failed; using the full source"}});
    }
  }

  std::vector<std::string> ids;
  for (std::uint32_t j = 1; j <= n; ++j) {
    PromptSpec ps = prompt_spec(iteration);
    ps.strategy = pick_strategy();
    VariantRecord rec;
    rec.id = "A" + std::to_string(iteration) + "." + std::to_string(++slots_[iteration]);
    rec.iteration = iteration;
    rec.prompt_id = "r" + std::to_string(request_counter_ + 1);
    pending_tokens_ = {0, 0};
    const Completion c = ask(iteration, rec.id, "generate", ps);
    if (!c.ok) continue;
    rec.prompt_tokens = pending_tokens_.first;
    rec.completion_tokens = pending_tokens_.second;
    if (auto err = absorb(rec, c.text)) {
      rec.diagnostics = *err;
    } else if (auto dup = registry_.find_equivalent(rec.function_text)) {
      rec.status = VariantStatus::kDuplicate;
      rec.duplicate_of = *dup;
      log_variant(registry_.add(std::move(rec)));
      continue;
    }
    ids.push_back(rec.id);
    registry_.add(std::move(rec));
  }
  return ids;
}

std::set<std::string> EvolutionEngine::validate(std::uint32_t iteration,
                                                const std::vector<std::string>& ids,
                                                const SmokeRunner& smoke) {
  std::set<std::string> valid;
  const std::uint32_t k = std::max<std::uint32_t>(1, spec_.evolution.max_compilation_failures);
  for (const auto& id : ids) {
    std::optional<Artifact> artifact;
    std::uint32_t corrections = 0;
    bool duplicate = false;
    for (std::uint32_t attempt = 1; attempt <= k; ++attempt) {
      VariantRecord& rec = registry_.mutable_get(id);
      rec.attempts = attempt;
      if (!rec.source_text.empty()) {
        const CompileOutcome out = compile_variant(spec_.build, rec.source_text, rec.id);
        if (run_log_ != nullptr) {
          run_log_->append("compile", {{"iteration", iteration},
                                       {"variant", rec.id},
                                       {"attempt", attempt},
                                       {"ok", out.ok},
                                       {"timed_out", out.timed_out},
                                       {"hash", out.hash}});
        }
        if (out.ok) {
          artifact = out.artifact;
          break;
        }
        rec.diagnostics = out.diagnostics;
      }
      if (attempt == k) break;

      PromptSpec ps = prompt_spec(iteration);
      ps.strategy = pick_strategy();
      if (spec_.evolution.intelligent_error_correction &&
          corrections < spec_.evolution.max_error_correction_attempts) {
        ps.failed_attempt = rec.function_text;
        ps.diagnostics = rec.diagnostics.substr(0, 4000);
        ++corrections;
      }
      const Completion c = ask(iteration, id, "repair", ps);
      if (!c.ok) break;
      VariantRecord& again = registry_.mutable_get(id);
      if (auto err = absorb(again, c.text)) {
        again.diagnostics = *err;
        continue;
      }
      if (auto dup = registry_.find_equivalent(again.function_text); dup && *dup != id) {
        again.status = VariantStatus::kDuplicate;
        again.duplicate_of = *dup;
        duplicate = true;
        break;
      }
    }

    VariantRecord& rec = registry_.mutable_get(id);
    if (duplicate) {
      log_variant(rec);
      continue;
    }
    if (!artifact) {
      rec.status = VariantStatus::kCompileFailed;
      log_variant(rec);
      continue;
    }
    rec.artifact = artifact;
    const RunResult run = smoke(*artifact);
    const bool clean = run.status == RunStatus::kOk && std::isfinite(run.cost);
    rec.status = clean ? VariantStatus::kValid : VariantStatus::kRuntimePenalized;
    if (!clean) rec.diagnostics = std::string("smoke run: ") + run_status_name(run.status);
    if (clean) valid.insert(id);
    log_variant(rec);
  }
  return valid;
}

std::set<std::string> EvolutionEngine::evolve(std::uint32_t iteration, std::uint32_t n,
                                              const SmokeRunner& smoke) {
  return validate(iteration, generate(iteration, n), smoke);
}

}  // namespace evoracer
