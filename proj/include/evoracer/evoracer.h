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

/*
 * evoracer C API.
 *
 * Handles are opaque; every call returns an evo_status. Strings returned
 * through `char**` out-parameters are owned by the caller and released with
 * evo_string_free. Not thread-safe per handle.
 */
#ifndef EVORACER_EVORACER_H_
#define EVORACER_EVORACER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(EVORACER_BUILDING_LIBRARY)
#define EVO_API __attribute__((visibility("default")))
#else
#define EVO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evo_status {
  EVO_OK = 0,
  EVO_E_INVALID_ARGUMENT = 1,
  EVO_E_MISSING_KEY = 2,
  EVO_E_TYPE_MISMATCH = 3,
  EVO_E_RANGE_VIOLATION = 4,
  EVO_E_UNREADABLE_FILE = 5,
  EVO_E_FILE_NOT_FOUND = 6,
  EVO_E_SCHEMA_VIOLATION = 7,
  EVO_E_NOT_FOUND = 8,
  EVO_E_AMBIGUOUS = 9,
  EVO_E_STALE_LOCATOR = 10,
  EVO_E_SIGNATURE_MISMATCH = 11,
  EVO_E_NO_CODE_BLOCK = 12,
  EVO_E_SIGNATURE_ABSENT = 13,
  EVO_E_PROVIDER_FAILURE = 14,
  EVO_E_AUTH_FAILURE = 15,
  EVO_E_TOOL_MISSING = 16,
  EVO_E_INFEASIBLE_POOL = 17,
  EVO_E_FATAL_ENVIRONMENT = 18,
  EVO_E_VALIDATION_FAILED = 19,
  EVO_E_MALFORMED_INPUT = 20,
  EVO_E_NULL_ARGUMENT = 90,
  EVO_E_INTERNAL = 99
} evo_status;

typedef struct evo_session evo_session;

EVO_API const char* evo_version(void);
EVO_API const char* evo_status_name(evo_status status);
EVO_API void evo_string_free(char* text);

/* Sessions. The scenario file is read lazily by validate/tune. */
EVO_API evo_status evo_session_open(const char* scenario_path, evo_session** out);
EVO_API void evo_session_close(evo_session* session);
/* Scenario override with the semantics of a `key = value` line. */
EVO_API evo_status evo_session_set(evo_session* session, const char* key, const char* value);
EVO_API evo_status evo_session_set_output(evo_session* session, const char* dir);
/* Human-readable issue list; *error_count receives the number of errors.
 * Returns EVO_E_VALIDATION_FAILED when there is at least one. */
EVO_API evo_status evo_session_validate(evo_session* session, char** report_text,
                                        size_t* error_count);
EVO_API evo_status evo_session_tune(evo_session* session);
EVO_API evo_status evo_session_winner_line(const evo_session* session, char** out);
EVO_API evo_status evo_session_report_json(const evo_session* session, char** out);
/* Message of the last failed call on this handle; never NULL. */
EVO_API const char* evo_session_last_error(const evo_session* session);

/* VSBPP instance sets: `count` files per size plus manifest.json. */
EVO_API evo_status evo_generate_instances(const char* cost_class, const int* sizes,
                                          size_t n_sizes, unsigned count, uint64_t seed,
                                          const char* out_dir, char** manifest_json,
                                          char** error);

/*
 * Reports.
 *   "cost":    paths = transcripts; options {"prices": "<file>"}.
 *   "errors":  paths = run logs, one table row each; options {"format": "table"|"json"}.
 *   "winrate": paths = {variant costs, baseline costs}, one number per line;
 *              options {"test": "sign"|"wilcoxon"}.
 * `options_json` may be NULL.
 */
EVO_API evo_status evo_report(const char* kind, const char* const* paths, size_t n_paths,
                              const char* options_json, char** output, char** error);

#ifdef __cplusplus
}
#endif

#endif /* EVORACER_EVORACER_H_ */
