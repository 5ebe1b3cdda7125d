#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace monored {

/// The property test's verdict for one candidate.
enum class Verdict { Interesting, NotInteresting };

inline const char* to_string(Verdict v) {
  return v == Verdict::Interesting ? "interesting" : "not_interesting";
}

/// One oracle evaluation: the verdict plus execution metadata. Timeouts are
/// always mapped to NotInteresting.
struct Outcome {
  Verdict verdict = Verdict::NotInteresting;
  std::optional<int> exit_code;
  std::chrono::duration<double> wall_time{0.0};
  bool was_timeout = false;
};

/// Harness-level oracle failure (cannot spawn, command missing, ...).
/// Deliberately distinct from NotInteresting: a run hitting this aborts.
class OracleError : public std::runtime_error {
 public:
  explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace monored
