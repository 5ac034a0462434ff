#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mirror/engine.hpp"

namespace mirror {

/// Query handle onto a perfect matching of K_n.
///
/// The matching itself is immutable and shared; each handle keeps its own
/// query counter, so handles may be copied into concurrent games.
class MatchingOracle {
 public:
  /// Takes ownership of an explicit involution; mate[x] for x in 1..n,
  /// mate[0] unused. Throws OutOfRange if it is not a fixed-point-free
  /// involution on [n].
  explicit MatchingOracle(std::vector<int> mate);

  int n() const noexcept { return static_cast<int>(mate_->size()) - 1; }
  int match(int x) const {
    ++queries_;
    return (*mate_)[static_cast<std::size_t>(x)];
  }
  std::uint64_t query_count() const noexcept { return queries_; }

  /// Pairs (x, match(x)) with x < match(x), ordered by x.
  std::vector<std::pair<int, int>> pairs() const;

 private:
  std::shared_ptr<const std::vector<int>> mate_;
  mutable std::uint64_t queries_ = 0;
};

/// Uniform perfect matching on K_n: pair up consecutive entries of a uniform
/// random permutation. Throws OddN for odd n.
MatchingOracle sample_matching(int n, std::uint64_t seed);
MatchingOracle sample_matching(int n, Rng& rng);

}  // namespace mirror
