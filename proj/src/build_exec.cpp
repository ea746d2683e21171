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

#include "evoracer/build_exec.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <mutex>
#include <thread>

#include "evoracer/error.hpp"
#include "evoracer/util.hpp"

namespace evoracer {
namespace {

constexpr std::size_t kTailBytes = 4096;

std::string tail(const std::string& text, std::size_t bytes = kTailBytes) {
  if (text.size() <= bytes) return text;
  return text.substr(text.size() - bytes);
}

void append_limited(std::string& sink, const char* data, std::size_t n,
                    std::size_t limit) {
  sink.append(data, n);
  // Keep the tail; COST is printed last.
  if (sink.size() > limit) sink.erase(0, sink.size() - limit);
}

}  // namespace

const char* language_tag_name(LanguageTag tag) {
  return tag == LanguageTag::kCFamily ? "c_family" : "script";
}

std::optional<LanguageTag> language_tag_from_string(std::string_view text) {
  if (text == "c_family" || text == "cpp" || text == "c++" || text == "c" ||
      text == "cxx") {
    return LanguageTag::kCFamily;
  }
  if (text == "script" || text == "python" || text == "py") {
    return LanguageTag::kScript;
  }
  return std::nullopt;
}

std::string BuildRecipe::canonical() const {
  std::ostringstream out;
  auto list = [&](const char* key, const std::vector<std::string>& items) {
    out << key << '=';
    for (const auto& item : items) out << item << '\x1f';
    out << '\n';
  };
  out << "compiler=" << compiler << '\n';
  list("flags", flags);
  list("link_flags", link_flags);
  list("include_paths", include_paths);
  list("library_paths", library_paths);
  list("libraries", libraries);
  out << "tag=" << language_tag_name(language_tag) << '\n';
  return out.str();
}

const char* run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kNonzeroExit: return "nonzero_exit";
    case RunStatus::kTimeout: return "timeout";
    case RunStatus::kCrash: return "crash";
    case RunStatus::kUnparseableOutput: return "unparseable_output";
  }
  return "?";
}

ProcessOutcome run_process(const std::vector<std::string>& argv, double timeout_seconds,
                           std::size_t capture_limit) {
  ProcessOutcome outcome;
  if (argv.empty()) return outcome;

  int out_pipe[2];
  int err_pipe[2];
  int exec_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0 ||
      pipe2(exec_pipe, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kFatalEnvironment, std::string("pipe: ") + std::strerror(errno));
  }

  std::vector<char*> cargs;
  cargs.reserve(argv.size() + 1);
  for (const auto& a : argv) cargs.push_back(const_cast<char*>(a.c_str()));
  cargs.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    throw Error(ErrorCode::kFatalEnvironment, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    execvp(cargs[0], cargs.data());
    const int err = errno;
    [[maybe_unused]] auto n = write(exec_pipe[1], &err, sizeof(err));
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);
  close(exec_pipe[1]);

  int exec_errno = 0;
  if (read(exec_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno)) {
    outcome.exec_errno = exec_errno;
  }
  close(exec_pipe[0]);
  outcome.started = outcome.exec_errno == 0;

  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  char buffer[8192];
  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(timeout_seconds));
  while (open_fds > 0) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      outcome.timed_out = true;
      break;
    }
    const auto remaining_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    const int ready = poll(fds, 2, static_cast<int>(std::max<long long>(1, remaining_ms)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
      const ssize_t n = read(fds[i].fd, buffer, sizeof(buffer));
      if (n <= 0) {
        close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      } else {
        append_limited(i == 0 ? outcome.stdout_text : outcome.stderr_text, buffer,
                       static_cast<std::size_t>(n), capture_limit);
      }
    }
  }

  int status = 0;
  if (outcome.timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
  } else {
    // Pipes closed; the child may still be exiting.
    while (true) {
      const pid_t r = waitpid(pid, &status, WNOHANG);
      if (r == pid) break;
      if (std::chrono::steady_clock::now() >= deadline) {
        outcome.timed_out = true;
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
  }
  for (auto& fd : fds) {
    if (fd.fd >= 0) close(fd.fd);
  }
  outcome.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!outcome.timed_out) {
    if (WIFEXITED(status)) {
      outcome.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      outcome.signaled = true;
      outcome.signal = WTERMSIG(status);
    }
  }
  return outcome;
}

CompileOutcome compile_variant(const BuildRecipe& recipe, const std::string& source_text,
                               const std::string& variant_id) {
  CompileOutcome outcome;
  outcome.hash = sha256_hex(recipe.canonical() + '\0' + source_text);
  const std::filesystem::path dir = recipe.output_dir / outcome.hash.substr(0, 24);
  const bool script = recipe.language_tag == LanguageTag::kScript;
  const std::filesystem::path source_path = dir / (script ? "variant.py" : "variant.cpp");
  const std::filesystem::path binary_path = script ? source_path : dir / "variant";
  const std::filesystem::path ok_marker = dir / "BUILD_OK";
  const std::filesystem::path failed_marker = dir / "BUILD_FAILED";

  Artifact artifact{binary_path, outcome.hash, recipe.language_tag,
                    script ? recipe.compiler : std::string(), false};

  if (std::filesystem::exists(ok_marker) && std::filesystem::exists(binary_path)) {
    artifact.cache_hit = true;
    outcome.ok = true;
    outcome.artifact = artifact;
    return outcome;
  }
  if (std::filesystem::exists(failed_marker)) {
    outcome.diagnostics = read_text_file(failed_marker);
    return outcome;
  }

  std::filesystem::create_directories(dir);
  write_text_file(source_path, source_text);
  write_text_file(dir / "VARIANT_ID", variant_id + "\n");

  std::vector<std::string> argv{recipe.compiler};
  if (script) {
    // Syntax check only; the script itself is the artifact.
    std::vector<std::string> flags = recipe.flags;
    if (flags.empty()) flags = {"-m", "py_compile"};
    argv.insert(argv.end(), flags.begin(), flags.end());
    argv.push_back(source_path.string());
  } else {
    argv.insert(argv.end(), recipe.flags.begin(), recipe.flags.end());
    for (const auto& inc : recipe.include_paths) argv.push_back("-I" + inc);
    argv.push_back(source_path.string());
    argv.push_back("-o");
    argv.push_back(binary_path.string());
    argv.insert(argv.end(), recipe.link_flags.begin(), recipe.link_flags.end());
    for (const auto& lib_dir : recipe.library_paths) argv.push_back("-L" + lib_dir);
    for (const auto& lib : recipe.libraries) argv.push_back("-l" + lib);
  }

  const ProcessOutcome process = run_process(argv, recipe.compile_timeout);
  if (!process.started) {
    throw Error(ErrorCode::kToolMissing, "cannot execute compiler '" + recipe.compiler +
                                             "': " + std::strerror(process.exec_errno));
  }
  outcome.diagnostics = tail(process.stderr_text + process.stdout_text, 16384);
  if (process.timed_out) {
    outcome.timed_out = true;
    outcome.diagnostics += "\ncompilation exceeded " + format_double(recipe.compile_timeout) +
                           " s timeout";
    return outcome;
  }
  if (process.exit_code != 0) {
    if (outcome.diagnostics.empty()) {
      outcome.diagnostics = "compiler exited with status " + std::to_string(process.exit_code);
    }
    write_text_file(failed_marker, outcome.diagnostics);
    return outcome;
  }
  write_text_file(ok_marker, outcome.hash + "\n");
  outcome.ok = true;
  outcome.artifact = artifact;
  return outcome;
}

std::optional<double> parse_cost_line(const std::string& stdout_text) {
  std::optional<double> cost;
  for (const std::string& line : split_lines(stdout_text)) {
    const std::string_view t = trim(line);
    if (!t.starts_with("COST ")) continue;
    const std::string_view number = trim(t.substr(5));
    double value = 0.0;
    const auto r = std::from_chars(number.data(), number.data() + number.size(), value);
    if (r.ec == std::errc() && r.ptr == number.data() + number.size() &&
        std::isfinite(value)) {
      cost = value;
    }
  }
  return cost;
}

RunResult execute_target(const Artifact& artifact, const std::filesystem::path& instance,
                         std::uint64_t seed, const std::vector<std::string>& param_args,
                         double time_limit, double grace) {
  std::vector<std::string> argv;
  if (!artifact.interpreter.empty()) argv.push_back(artifact.interpreter);
  argv.push_back(artifact.path.string());
  argv.insert(argv.end(), {"--instance", instance.string(), "--seed", std::to_string(seed),
                           "--time-limit", format_double(time_limit)});
  argv.insert(argv.end(), param_args.begin(), param_args.end());

  RunResult result;
  const ProcessOutcome process = run_process(argv, time_limit + grace);
  result.wall_time = process.wall_time;
  result.stdout_tail = tail(process.stdout_text);
  result.stderr_tail = tail(process.stderr_text);
  if (!process.started) {
    result.status = RunStatus::kCrash;
    result.stderr_tail = std::string("exec failed: ") + std::strerror(process.exec_errno);
  } else if (process.timed_out) {
    result.status = RunStatus::kTimeout;
  } else if (process.signaled) {
    result.status = RunStatus::kCrash;
  } else if (process.exit_code != 0) {
    result.status = RunStatus::kNonzeroExit;
  } else if (const auto cost = parse_cost_line(process.stdout_text)) {
    result.status = RunStatus::kOk;
    result.cost = *cost;
  } else {
    result.status = RunStatus::kUnparseableOutput;
  }
  return result;
}

double penalized_cost(const RunResult& result, const PenaltyPolicy& policy) {
  if (result.status == RunStatus::kOk && std::isfinite(result.cost)) return result.cost;
  return policy.penalty_value;
}

void parallel_for(std::size_t count, unsigned jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace evoracer
