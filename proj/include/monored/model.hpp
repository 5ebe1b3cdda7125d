#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "monored/candidate.hpp"
#include "monored/history.hpp"
#include "monored/rng.hpp"

namespace monored {

/// How an executed candidate relates to the monotonicity assumption.
/// NotApplicable is the verdict for every NotInteresting outcome: only
/// failure-inducing candidates can confirm or contradict monotonicity.
enum class MonoVerdict { Compliant, Violation, NotApplicable };

inline const char* to_string(MonoVerdict v) {
  switch (v) {
    case MonoVerdict::Compliant: return "compliant";
    case MonoVerdict::Violation: return "violation";
    default: return "not_applicable";
  }
}

/// Logistic confidence in the search space's monotonicity, 1/(1 + e^(-m)).
///
/// The result always lies strictly inside (0,1) and is strictly increasing
/// for integer arguments in [-745, 142]:
///   * m in [-32, 32]: the correctly computed sigmoid; the m < 0 half is
///     derived as 1 - confidence(-m), which is exact (Sterbenz) and makes
///     the symmetry identity hold to the last bit where it is testable.
///   * m < -32: computed directly as e^m / (1 + e^m), which stays accurate
///     down into the denormals; floored at the smallest positive double.
///   * m > 32: the true value is within ~114 ulps of 1 and consecutive
///     integers stop being distinguishable at m = 37, so the saturated tail
///     steps down one representable value per unit of m instead of clamping
///     to a single constant. This keeps the ordering strict deep into
///     saturation at the cost of ~1e-14 absolute error nobody can observe
///     through a uniform draw.
inline double confidence(double m) {
  if (m < 0.0) {
    if (m >= -32.0) return 1.0 - confidence(-m);
    const double t = std::exp(m);
    const double c = t / (1.0 + t);
    return c > 0.0 ? c : std::numeric_limits<double>::denorm_min();
  }
  if (m <= 32.0) {
    return 1.0 / (1.0 + std::exp(-m));
  }
  // 1 - sigmoid(32) rounds to 114 * 2^-53; start the ladder a few steps
  // above that so libm rounding cannot break the ordering at the seam.
  const double steps = std::fmin(std::floor(m - 32.0), 110.0);
  return 1.0 - (111.0 - steps) * 0x1p-53;
}

/// Net monotonicity compliance count plus the replayable draw state that
/// drives skip decisions. One instance per reduction run, mutated only by
/// the engine's sequential loop.
struct ConfidenceState {
  explicit ConfidenceState(
      std::uint64_t seed,
      std::optional<std::vector<double>> replay = std::nullopt)
      : rng_seed(seed), draws(seed, std::move(replay)) {}

  std::int64_t m = 0;
  std::uint64_t rng_seed = 0;
  DrawSource draws;

  double confidence_now() const { return confidence(static_cast<double>(m)); }
  std::uint64_t draws_consumed() const { return draws.consumed(); }
};

/// Assesses whether an executed candidate's outcome complied with
/// monotonicity. `history` must contain only candidates executed strictly
/// before this one.
inline MonoVerdict mono_assr(const Candidate& candidate, Verdict outcome,
                             const HistoryStore& history) {
  if (outcome == Verdict::NotInteresting) return MonoVerdict::NotApplicable;
  return history.has_failing_superset(candidate) ? MonoVerdict::Violation
                                                 : MonoVerdict::Compliant;
}

/// Applies a verdict to the net compliance count: +1 on compliance, -1 on
/// violation, unchanged otherwise.
inline void mono_update(ConfidenceState& state, MonoVerdict verdict) {
  switch (verdict) {
    case MonoVerdict::Compliant: ++state.m; break;
    case MonoVerdict::Violation: --state.m; break;
    case MonoVerdict::NotApplicable: break;
  }
}

/// A candidate is skippable at all iff some executed NotInteresting superset
/// exists; under monotonicity its outcome would then be forced.
inline bool skip_enabled(const Candidate& candidate,
                         const HistoryStore& history) {
  return history.has_failing_superset(candidate);
}

/// Probabilistic gate: skip when the current confidence beats the uniform
/// draw. `u` must come from the state's draw source (or a replay list).
inline bool skip_allowed(const ConfidenceState& state, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw std::invalid_argument("skip_allowed: draw outside (0,1)");
  }
  return state.confidence_now() > u;
}

struct Decision {
  enum class Action { Execute, Skip };
  Action action = Action::Execute;
  /// The uniform draw, present iff skip_enabled held (a draw is consumed
  /// only when the skip gate is actually consulted).
  std::optional<double> draw;

  bool skipped() const { return action == Action::Skip; }
};

/// Full per-candidate decision: Skip iff skip_enabled and skip_allowed both
/// agree. Consumes one draw from `state` exactly when skip_enabled is true.
inline Decision decide(const Candidate& candidate, const HistoryStore& history,
                       ConfidenceState& state) {
  Decision d;
  if (!skip_enabled(candidate, history)) return d;
  const double u = state.draws.next();
  d.draw = u;
  d.action = skip_allowed(state, u) ? Decision::Action::Skip
                                    : Decision::Action::Execute;
  return d;
}

}  // namespace monored
