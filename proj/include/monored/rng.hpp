#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace monored {

/// Identifier written into trace headers so a trace pins the exact draw
/// algorithm it was produced with.
inline constexpr const char* kPrngId = "mt19937_64-mid53";

/// Deterministic source of uniform draws in the open interval (0,1).
///
/// Draws come from the standard-specified mt19937_64 stream: the top 53 bits
/// of each output are mapped to (k + 0.5) * 2^-53, which is bit-identical on
/// every conforming platform and can never produce 0 or 1. In replay mode
/// the draws are taken from an injected list instead; exhausting that list
/// is a harness bug and throws.
class DrawSource {
 public:
  explicit DrawSource(std::uint64_t seed,
                      std::optional<std::vector<double>> replay = std::nullopt)
      : engine_(seed), replay_(std::move(replay)) {
    if (replay_) {
      for (double u : *replay_) {
        if (!(u > 0.0 && u < 1.0)) {
          throw std::invalid_argument("replay draw outside (0,1)");
        }
      }
    }
  }

  double next() {
    double u;
    if (replay_) {
      if (replay_pos_ >= replay_->size()) {
        throw std::logic_error("replay draw list exhausted");
      }
      u = (*replay_)[replay_pos_++];
    } else {
      u = ((engine_() >> 11) + 0.5) * 0x1p-53;
    }
    ++consumed_;
    return u;
  }

  std::uint64_t consumed() const { return consumed_; }
  bool replaying() const { return replay_.has_value(); }

 private:
  std::mt19937_64 engine_;
  std::optional<std::vector<double>> replay_;
  std::size_t replay_pos_ = 0;
  std::uint64_t consumed_ = 0;
};

}  // namespace monored
