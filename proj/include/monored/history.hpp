#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <vector>

#include "monored/candidate.hpp"
#include "monored/outcome.hpp"

namespace monored {

/// Stores every executed candidate with its verdict and answers the
/// failing-superset queries the skip machinery is built on. Skipped
/// candidates never enter the store.
///
/// Failing candidates are bucketed by cardinality so superset queries can
/// ignore every bucket smaller than the query. Duplicates are stored once
/// per execution; there is no set-equality dedup on insert.
class HistoryStore {
 public:
  void record(const Candidate& candidate, Verdict verdict) {
    if (verdict == Verdict::NotInteresting) {
      failing_[candidate.cardinality()].push_back(candidate);
    } else {
      passing_.push_back(candidate);
    }
    ++executed_count_;
  }

  /// True iff some executed NotInteresting candidate is a superset of
  /// `candidate` (equality counts: every set is a superset of itself).
  bool has_failing_superset(const Candidate& candidate) const {
    // Largest buckets first; stop once buckets are too small to contain a
    // superset.
    for (auto it = failing_.rbegin(); it != failing_.rend(); ++it) {
      if (it->first < candidate.cardinality()) break;
      for (const Candidate& f : it->second) {
        if (candidate.subset_of(f)) return true;
      }
    }
    return false;
  }

  /// Reference implementation: unpruned linear scan. Kept as the oracle the
  /// bucketed query is tested against.
  bool has_failing_superset_bruteforce(const Candidate& candidate) const {
    for (const auto& [card, bucket] : failing_) {
      for (const Candidate& f : bucket) {
        if (candidate.subset_of(f)) return true;
      }
    }
    return false;
  }

  std::size_t executed_count() const { return executed_count_; }

  std::size_t failing_count() const {
    std::size_t n = 0;
    for (const auto& [card, bucket] : failing_) n += bucket.size();
    return n;
  }

  std::size_t passing_count() const { return passing_.size(); }

  /// Postmortem dump, one record per line:
  ///   <outcome> <cardinality> <hex-encoded bitset>
  /// Failing records first (largest cardinality first), then passing ones.
  void dump(std::ostream& os) const {
    for (auto it = failing_.rbegin(); it != failing_.rend(); ++it) {
      for (const Candidate& f : it->second) {
        os << to_string(Verdict::NotInteresting) << ' ' << f.cardinality()
           << ' ' << f.to_hex() << '\n';
      }
    }
    for (const Candidate& p : passing_) {
      os << to_string(Verdict::Interesting) << ' ' << p.cardinality() << ' '
         << p.to_hex() << '\n';
    }
  }

 private:
  std::map<std::size_t, std::vector<Candidate>> failing_;
  std::vector<Candidate> passing_;
  std::size_t executed_count_ = 0;
};

}  // namespace monored
