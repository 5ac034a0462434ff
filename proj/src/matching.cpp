#include "mirror/matching.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mirror {

MatchingOracle::MatchingOracle(std::vector<int> mate) {
  const int n = static_cast<int>(mate.size()) - 1;
  if (n < 2 || n % 2 != 0) {
    throw MirrorError(ErrorCode::OddN, "a perfect matching needs an even n >= 2");
  }
  for (int x = 1; x <= n; ++x) {
    const int y = mate[static_cast<std::size_t>(x)];
    if (y < 1 || y > n || y == x || mate[static_cast<std::size_t>(y)] != x) {
      throw MirrorError(ErrorCode::OutOfRange,
                        "not a fixed-point-free involution at " + std::to_string(x));
    }
  }
  mate_ = std::make_shared<const std::vector<int>>(std::move(mate));
}

std::vector<std::pair<int, int>> MatchingOracle::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 1; x <= n(); ++x) {
    const int y = (*mate_)[static_cast<std::size_t>(x)];
    if (x < y) out.emplace_back(x, y);
  }
  return out;
}

MatchingOracle sample_matching(int n, Rng& rng) {
  if (n < 2 || n % 2 != 0) {
    throw MirrorError(ErrorCode::OddN, "sample_matching needs an even n >= 2, got " +
                                           std::to_string(n));
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> mate(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < perm.size(); i += 2) {
    mate[static_cast<std::size_t>(perm[i])] = perm[i + 1];
    mate[static_cast<std::size_t>(perm[i + 1])] = perm[i];
  }
  return MatchingOracle(std::move(mate));
}

MatchingOracle sample_matching(int n, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0));
  return sample_matching(n, rng);
}

}  // namespace mirror
