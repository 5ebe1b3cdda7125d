#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace monored {

/// An immutable subset of the universe, stored as a dense bitset over
/// 64-bit words with the population count cached at construction.
/// Bit i corresponds to universe element i.
class Candidate {
 public:
  Candidate() = default;

  explicit Candidate(std::size_t universe_size)
      : nbits_(universe_size), words_((universe_size + 63) / 64, 0) {}

  static Candidate full(std::size_t universe_size) {
    Candidate c(universe_size);
    for (std::size_t i = 0; i + 1 < c.words_.size(); ++i) {
      c.words_[i] = ~std::uint64_t{0};
    }
    if (!c.words_.empty()) {
      const std::size_t rem = universe_size % 64;
      c.words_.back() = rem == 0 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << rem) - 1;
    }
    c.cardinality_ = universe_size;
    return c;
  }

  static Candidate from_indices(std::size_t universe_size,
                                std::span<const std::uint32_t> indices) {
    Candidate c(universe_size);
    for (std::uint32_t i : indices) {
      if (i >= universe_size) {
        throw std::out_of_range("Candidate index outside universe");
      }
      std::uint64_t& w = c.words_[i / 64];
      const std::uint64_t bit = std::uint64_t{1} << (i % 64);
      if (!(w & bit)) {
        w |= bit;
        ++c.cardinality_;
      }
    }
    return c;
  }

  static Candidate from_indices(std::size_t universe_size,
                                std::initializer_list<std::uint32_t> indices) {
    return from_indices(universe_size,
                        std::span<const std::uint32_t>(indices.begin(),
                                                       indices.size()));
  }

  std::size_t universe_size() const { return nbits_; }
  std::size_t cardinality() const { return cardinality_; }
  bool empty() const { return cardinality_ == 0; }

  bool test(std::size_t i) const {
    return i < nbits_ &&
           (words_[i / 64] >> (i % 64)) & std::uint64_t{1};
  }

  /// True iff every element of *this is also in `other` (equality allowed).
  bool subset_of(const Candidate& other) const {
    require_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
  }

  /// Elements of *this that are not in `other`.
  Candidate minus(const Candidate& other) const {
    require_same_universe(other);
    Candidate r(nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      r.words_[i] = words_[i] & ~other.words_[i];
      r.cardinality_ += static_cast<std::size_t>(std::popcount(r.words_[i]));
    }
    return r;
  }

  /// Set bits in ascending universe order.
  std::vector<std::uint32_t> indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(cardinality_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        const int b = std::countr_zero(word);
        out.push_back(static_cast<std::uint32_t>(w * 64 + b));
        word &= word - 1;
      }
    }
    return out;
  }

  /// Lowercase hex of the bitset interpreted as an integer (bit i has
  /// weight 2^i); "0" for the empty set.
  std::string to_hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    bool leading = true;
    for (std::size_t w = words_.size(); w-- > 0;) {
      for (int shift = 60; shift >= 0; shift -= 4) {
        const unsigned nibble = (words_[w] >> shift) & 0xF;
        if (leading && nibble == 0) continue;
        leading = false;
        out.push_back(digits[nibble]);
      }
    }
    return out.empty() ? "0" : out;
  }

  bool operator==(const Candidate& other) const {
    return nbits_ == other.nbits_ && words_ == other.words_;
  }

  std::size_t hash() const {
    std::size_t h = nbits_;
    for (std::uint64_t w : words_) {
      h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }

 private:
  void require_same_universe(const Candidate& other) const {
    if (nbits_ != other.nbits_) {
      throw std::invalid_argument("Candidates belong to different universes");
    }
  }

  std::size_t nbits_ = 0;
  std::size_t cardinality_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CandidateHash {
  std::size_t operator()(const Candidate& c) const { return c.hash(); }
};

}  // namespace monored
