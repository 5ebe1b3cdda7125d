#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "monored/candidate.hpp"
#include "monored/outcome.hpp"

extern char** environ;

namespace monored {

/// Any property test: maps a candidate to its Outcome. Throws OracleError on
/// harness-level failure.
using Oracle = std::function<Outcome(const Candidate&)>;

/// Configuration of an external interestingness command.
///
/// The command is run through `/bin/sh -c` in a fresh scratch directory that
/// contains the rendered candidate under `candidate_filename`. The command
/// can locate the candidate three ways: the fixed relative name, the
/// CANDIDATE_PATH environment variable, or `$1` (the absolute path is passed
/// as the first positional argument).
///
/// Exit code 0 means Interesting. Any other exit, a fatal signal, or a
/// timeout means NotInteresting. The shell's "command not found"/"not
/// executable" codes (127/126) are reported as OracleError instead, since
/// they indicate a broken harness rather than an uninteresting candidate.
struct OracleSpec {
  std::string command;
  std::filesystem::path workdir;  // empty: system temp directory
  std::chrono::duration<double> per_test_timeout{60.0};
  std::string candidate_filename = "candidate";
  /// Empty: child inherits the full environment. Otherwise only the listed
  /// variables (plus CANDIDATE_PATH) are forwarded.
  std::vector<std::string> env_passthrough;
  bool keep_temps = false;
  bool capture_logs = false;  // stdout/stderr into scratch-local log files
};

namespace detail {

inline std::filesystem::path make_scratch_dir(const OracleSpec& spec) {
  static std::atomic<std::uint64_t> counter{0};
  const auto base = spec.workdir.empty()
                        ? std::filesystem::temp_directory_path()
                        : spec.workdir;
  const auto dir = base / ("monored-" + std::to_string(::getpid()) + "-" +
                           std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<std::string> build_env(const OracleSpec& spec,
                                          const std::string& candidate_path) {
  std::vector<std::string> env;
  if (spec.env_passthrough.empty()) {
    for (char** e = environ; *e != nullptr; ++e) env.emplace_back(*e);
  } else {
    for (const std::string& name : spec.env_passthrough) {
      if (const char* value = std::getenv(name.c_str())) {
        env.push_back(name + "=" + value);
      }
    }
  }
  env.push_back("CANDIDATE_PATH=" + candidate_path);
  return env;
}

}  // namespace detail

/// Writes `rendered` into a scratch directory, runs the command, and maps
/// its result to an Outcome.
inline Outcome run_external(const OracleSpec& spec, std::string_view rendered) {
  namespace fs = std::filesystem;
  if (spec.command.empty()) {
    throw std::invalid_argument("oracle command is empty");
  }
  if (!(spec.per_test_timeout.count() > 0.0)) {
    throw std::invalid_argument("per-test timeout must be positive");
  }

  const fs::path scratch = detail::make_scratch_dir(spec);
  const fs::path candidate_path = scratch / spec.candidate_filename;
  {
    std::ofstream out(candidate_path, std::ios::binary);
    out.write(rendered.data(),
              static_cast<std::streamsize>(rendered.size()));
    if (!out) throw OracleError("cannot write candidate file: " +
                                candidate_path.string());
  }

  std::vector<std::string> env_storage =
      detail::build_env(spec, fs::absolute(candidate_path).string());
  std::vector<char*> envp;
  envp.reserve(env_storage.size() + 1);
  for (std::string& e : env_storage) envp.push_back(e.data());
  envp.push_back(nullptr);

  const std::string candidate_abs = fs::absolute(candidate_path).string();
  const std::string scratch_str = scratch.string();
  const char* argv[] = {"/bin/sh", "-c",         spec.command.c_str(),
                        "monored-oracle", candidate_abs.c_str(), nullptr};

  const auto started = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw OracleError("fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);  // own process group, so a timeout kill reaps children
    if (::chdir(scratch_str.c_str()) != 0) ::_exit(127);
    const int devnull = ::open("/dev/null", O_RDWR);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (spec.capture_logs) {
      const int out = ::open("stdout.log", O_WRONLY | O_CREAT | O_TRUNC, 0644);
      const int err = ::open("stderr.log", O_WRONLY | O_CREAT | O_TRUNC, 0644);
      if (out >= 0) ::dup2(out, STDOUT_FILENO);
      if (err >= 0) ::dup2(err, STDERR_FILENO);
    } else if (devnull >= 0) {
      ::dup2(devnull, STDOUT_FILENO);
      ::dup2(devnull, STDERR_FILENO);
    }
    ::execve("/bin/sh", const_cast<char* const*>(argv), envp.data());
    ::_exit(127);
  }

  const auto deadline =
      started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    spec.per_test_timeout);
  int status = 0;
  bool timed_out = false;
  std::chrono::microseconds backoff{200};
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw OracleError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(backoff);
    if (backoff < std::chrono::microseconds{5000}) backoff *= 2;
  }
  const auto wall = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - started);

  if (!spec.keep_temps) {
    std::error_code ec;
    fs::remove_all(scratch, ec);
  }

  Outcome out;
  out.wall_time = wall;
  if (timed_out) {
    out.verdict = Verdict::NotInteresting;
    out.was_timeout = true;
    return out;
  }
  if (WIFEXITED(status)) {
    const int code = WEXITSTATUS(status);
    if (code == 126 || code == 127) {
      throw OracleError("oracle command failed to launch (exit " +
                        std::to_string(code) + "): " + spec.command);
    }
    out.exit_code = code;
    out.verdict = code == 0 ? Verdict::Interesting : Verdict::NotInteresting;
    return out;
  }
  if (WIFSIGNALED(status)) {
    out.exit_code = 128 + WTERMSIG(status);
    out.verdict = Verdict::NotInteresting;
    return out;
  }
  throw OracleError("oracle command ended in unexpected wait status");
}

/// Oracle backed by an external command; candidates are serialized with the
/// supplied renderer before each run.
class ExternalOracle {
 public:
  ExternalOracle(OracleSpec spec,
                 std::function<std::string(const Candidate&)> renderer)
      : spec_(std::move(spec)), renderer_(std::move(renderer)) {}

  Outcome operator()(const Candidate& candidate) const {
    return run_external(spec_, renderer_(candidate));
  }

  const OracleSpec& spec() const { return spec_; }

 private:
  OracleSpec spec_;
  std::function<std::string(const Candidate&)> renderer_;
};

/// Ground-truth monotone property test: interesting iff `target` is a
/// subset of the candidate.
inline Oracle monotone_oracle(const Candidate& target) {
  if (target.empty()) {
    throw std::invalid_argument("monotone oracle target must be non-empty");
  }
  return [target](const Candidate& c) {
    Outcome out;
    out.verdict = target.subset_of(c) ? Verdict::Interesting
                                      : Verdict::NotInteresting;
    return out;
  };
}

using TruthTable = std::unordered_map<Candidate, Verdict, CandidateHash>;

/// Pure lookup oracle for golden traces. A candidate missing from the table
/// is a harness bug, not a NotInteresting result.
inline Oracle tabular_oracle(TruthTable table) {
  return [table = std::move(table)](const Candidate& c) {
    const auto it = table.find(c);
    if (it == table.end()) {
      throw std::logic_error("tabular oracle: no entry for candidate 0x" +
                             c.to_hex());
    }
    Outcome out;
    out.verdict = it->second;
    return out;
  };
}

/// Optional exact-duplicate memoization in front of another oracle. Off by
/// default; when enabled, repeated candidates cost nothing and are counted
/// as cache hits rather than executions.
class CachingOracle {
 public:
  CachingOracle(Oracle inner, bool enabled)
      : inner_(std::move(inner)), enabled_(enabled) {}

  Outcome operator()(const Candidate& candidate) {
    if (enabled_) {
      const auto it = cache_.find(candidate);
      if (it != cache_.end()) {
        ++cache_hits_;
        return it->second;
      }
    }
    Outcome out = inner_(candidate);
    ++executions_;
    if (enabled_) cache_.emplace(candidate, out);
    return out;
  }

  std::size_t executions() const { return executions_; }
  std::size_t cache_hits() const { return cache_hits_; }
  bool enabled() const { return enabled_; }

 private:
  Oracle inner_;
  bool enabled_;
  std::unordered_map<Candidate, Outcome, CandidateHash> cache_;
  std::size_t executions_ = 0;
  std::size_t cache_hits_ = 0;
};

}  // namespace monored
