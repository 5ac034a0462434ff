#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mirror/setfam.hpp"

using namespace mirror;

namespace {

using Lists = std::vector<std::vector<int>>;

bool parity_ok(std::size_t count, Parity p) { return (count % 2 == 1) == (p == Parity::Odd); }

// Straight from the definition, on explicit element lists.
bool town_oracle(const Lists& sets, TownKind kind) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!parity_ok(sets[i].size(), kind.set_parity)) return false;
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                            std::back_inserter(common));
      if (!parity_ok(common.size(), kind.intersection_parity)) return false;
    }
  }
  return true;
}

// Largest valid subfamily by trying every subfamily of the 2^n subsets.
std::size_t brute_max_town(int n, TownKind kind) {
  const int subsets = 1 << n;
  std::size_t best = 0;
  for (std::uint64_t pick = 0; pick < (1ull << subsets); ++pick) {
    Lists sets;
    for (int s = 0; s < subsets; ++s) {
      if (((pick >> s) & 1) == 0) continue;
      std::vector<int> members;
      for (int x = 0; x < n; ++x) {
        if ((s >> x) & 1) members.push_back(x + 1);
      }
      sets.push_back(members);
    }
    if (sets.size() > best && town_oracle(sets, kind)) best = sets.size();
  }
  return best;
}

std::uint64_t pascal(int n, int k) {
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return (k < 0 || k > n) ? 0 : c[n][k];
}

SetFamily all_subsets_of_size(int n, int size) {
  std::vector<Mask> sets;
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    if (cardinality(s) == size) sets.push_back(s);
  }
  return SetFamily::make(n, sets);
}

const TownKind kOddEven{Parity::Odd, Parity::Even};
const TownKind kEvenOdd{Parity::Even, Parity::Odd};
const TownKind kEvenEven{Parity::Even, Parity::Even};
const TownKind kOddOdd{Parity::Odd, Parity::Odd};

}  // namespace

TEST(SetFamily, Validation) {
  EXPECT_THROW(SetFamily::from_lists(3, {{1, 4}}), MirrorError);
  EXPECT_THROW(SetFamily::from_lists(3, {{1, 2}, {2, 1}}), MirrorError);
  EXPECT_THROW(SetFamily::from_lists(65, {}), MirrorError);
  const auto f = SetFamily::from_lists(5, {{3, 1}, {}});
  EXPECT_EQ(f.to_lists(), (Lists{{1, 3}, {}}));
  EXPECT_EQ(family_from_json(to_json(f)).sets, f.sets);
}

TEST(CheckTown, Examples) {
  EXPECT_TRUE(check_town(SetFamily::from_lists(3, {{1}, {2}, {3}}), kOddEven));
  EXPECT_TRUE(check_town(SetFamily::from_lists(3, {{1, 2}, {1, 3}, {2, 3}}), kEvenOdd));
  EXPECT_FALSE(check_town(SetFamily::from_lists(4, {{1, 2}, {3, 4}}), kEvenOdd));
  EXPECT_TRUE(check_town(SetFamily::from_lists(4, {}), kOddOdd));
}

TEST(CheckTown, AgreesWithDefinition) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 5);
    const std::size_t want = rng() % 7;
    std::set<Mask> chosen;
    for (std::size_t i = 0; i < want; ++i) chosen.insert(rng() % (Mask{1} << n));
    const auto f = SetFamily::make(n, {chosen.begin(), chosen.end()});
    const Lists lists = f.to_lists();
    for (auto kind : {kOddEven, kEvenOdd, kEvenEven, kOddOdd}) {
      ASSERT_EQ(check_town(f, kind), town_oracle(lists, kind));
    }
  }
}

TEST(CheckModtown, Examples) {
  const auto tri = SetFamily::from_lists(3, {{1, 2}, {1, 3}, {2, 3}});
  EXPECT_TRUE(check_modtown(tri, ModtownSpec::make(2, {1})));
  EXPECT_FALSE(check_modtown(SetFamily::from_lists(3, {{1, 2, 3}}), ModtownSpec::make(3, {0})));
  EXPECT_TRUE(check_modtown(SetFamily::from_lists(3, {{1, 2, 3}}), ModtownSpec::make(3, {1})));
  EXPECT_TRUE(check_modtown(SetFamily::from_lists(3, {}), ModtownSpec::make(3, {1})));
  EXPECT_THROW(ModtownSpec::make(1, {}), MirrorError);
  EXPECT_THROW(ModtownSpec::make(3, {3}), MirrorError);
  EXPECT_EQ(parse_modtown_spec("3,0,2").L, (std::vector<int>{0, 2}));
}

TEST(CheckModtown, ParityTwoMatchesEvenOdd) {
  std::mt19937_64 rng(12);
  const auto spec = ModtownSpec::make(2, {1});
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    std::set<Mask> chosen;
    for (int i = 0; i < 5; ++i) {
      const Mask s = rng() % (Mask{1} << n);
      if (cardinality(s) % 2 == 0) chosen.insert(s);
    }
    const auto f = SetFamily::make(n, {chosen.begin(), chosen.end()});
    ASSERT_EQ(check_modtown(f, spec), check_town(f, kEvenOdd));
  }
}

TEST(Bounds, FranklWilsonAndBinomial) {
  EXPECT_EQ(frankl_wilson_bound(4, 1), 5);
  EXPECT_EQ(frankl_wilson_bound(10, 0), 1);
  EXPECT_EQ(frankl_wilson_bound(6, 2), 22);
  for (int n = 0; n <= 40; ++n) {
    std::uint64_t sum = 0;
    for (int k = 0; k <= n; ++k) {
      ASSERT_EQ(binomial(n, k), pascal(n, k));
      sum += pascal(n, k);
      ASSERT_EQ(frankl_wilson_bound(n, k), sum);
    }
  }
  EXPECT_EQ(binomial(100, 50).str(), "100891344545564193334812497256");
}

TEST(MaxTown, Examples) {
  EXPECT_EQ(max_town_size(3, kOddEven), 3u);
  EXPECT_EQ(max_town_size(3, kEvenOdd), 3u);
  EXPECT_EQ(max_town_size(2, kEvenEven), 2u);
  const auto r = search_max_town(2, kEvenEven);
  EXPECT_EQ(r.max_size_without_empty, 1u);
  EXPECT_TRUE(check_town(r.witness, kEvenEven));
  EXPECT_THROW(max_town_size(9, kOddEven), MirrorError);
}

TEST(MaxTown, AgreesWithBruteForce) {
  for (int n = 1; n <= 4; ++n) {
    for (auto kind : {kOddEven, kEvenOdd, kEvenEven, kOddOdd}) {
      const auto r = search_max_town(n, kind);
      EXPECT_EQ(r.max_size, brute_max_town(n, kind)) << n << ' ' << to_string(kind);
      EXPECT_EQ(r.witness.size(), r.max_size);
      EXPECT_TRUE(check_town(r.witness, kind));
    }
  }
}

TEST(MaxTown, ClassicalBounds) {
  for (int n = 2; n <= 7; ++n) {
    EXPECT_EQ(max_town_size(n, kOddEven), static_cast<std::size_t>(n));
    EXPECT_LE(max_town_size(n, kEvenOdd), static_cast<std::size_t>(n));
    EXPECT_EQ(max_town_size(n, kEvenEven), std::size_t{1} << (n / 2));
  }
}

TEST(MaxTown, DualEmbedding) {
  for (int n = 1; n <= 5; ++n) {
    std::size_t count = 0;
    for_each_town(n, kEvenOdd, [&](const SetFamily& f) {
      std::vector<Mask> lifted;
      for (Mask s : f.sets) lifted.push_back(s | (Mask{1} << n));
      EXPECT_TRUE(check_town(SetFamily::make(n + 1, lifted), kOddEven));
      ++count;
    });
    EXPECT_GT(count, 0u);
  }
  EXPECT_THROW(for_each_town(7, kOddEven, [](const SetFamily&) {}), MirrorError);
}

TEST(ForEachTown, CountsMatchBruteForce) {
  // n = 3, (Odd,Even): nonempty cliques among the 4 odd subsets.
  std::size_t count = 0;
  for_each_town(3, kOddEven, [&](const SetFamily& f) {
    EXPECT_TRUE(check_town(f, kOddEven));
    ++count;
  });
  std::size_t brute = 0;
  const std::vector<Mask> odd = {0b001, 0b010, 0b100, 0b111};
  for (int pick = 1; pick < 16; ++pick) {
    std::vector<Mask> sets;
    for (int i = 0; i < 4; ++i) {
      if ((pick >> i) & 1) sets.push_back(odd[static_cast<std::size_t>(i)]);
    }
    if (check_town(SetFamily::make(3, sets), kOddEven)) ++brute;
  }
  EXPECT_EQ(count, brute);
}

TEST(Eventown, Pairing) {
  EXPECT_EQ(eventown_pairing(4).to_lists(), (Lists{{}, {1, 2}, {3, 4}, {1, 2, 3, 4}}));
  const auto six = eventown_pairing(6);
  EXPECT_EQ(six.size(), 8u);
  EXPECT_TRUE(check_town(six, kEvenEven));
  for (int n = 2; n <= 20; n += 2) {
    const auto f = eventown_pairing(n);
    EXPECT_EQ(f.size(), std::size_t{1} << (n / 2));
    EXPECT_TRUE(check_town(f, kEvenEven));
  }
  EXPECT_THROW(eventown_pairing(5), MirrorError);
}

TEST(Covering, Examples) {
  for (int n = 2; n <= 7; ++n) {
    for (int r = 1; 2 * r <= n; ++r) {
      const auto all = all_subsets_of_size(n, 2 * r);
      EXPECT_TRUE(check_covering(all, 2, r));
      EXPECT_GE(BigInt(all.size()), covering_lower_bound(n, 2, r));
    }
  }
  EXPECT_FALSE(check_covering(SetFamily::from_lists(3, {{1, 2}}), 2, 1));
  EXPECT_TRUE(check_covering(SetFamily::from_lists(4, {{1, 2}, {1, 3}, {1, 4}}), 2, 1));
  EXPECT_FALSE(check_covering(SetFamily::from_lists(4, {{1, 2, 3}}), 2, 1));
}

TEST(Covering, LowerBoundExactFractions) {
  EXPECT_EQ(covering_lower_bound(10, 2, 2), 8);
  EXPECT_EQ(covering_lower_bound(4, 2, 1), 2);
  for (int n = 1; n <= 30; ++n) {
    for (int p = 1; p <= 4; ++p) {
      for (int r = 0; p * r <= n; ++r) {
        const std::uint64_t num = pascal(n, r);
        const std::uint64_t den = pascal(p * r, r);
        ASSERT_EQ(covering_lower_bound(n, p, r), (num + den - 1) / den) << n << p << r;
      }
    }
  }
  EXPECT_THROW(covering_lower_bound(5, 2, 3), MirrorError);
}

TEST(Covering, LowerBoundGrowthRate) {
  const double target = std::log2(5.0) - 2.0;
  for (int n : {50, 100, 200}) {
    const BigInt bound = covering_lower_bound(n, 2, n / 5);
    const double lg = std::log2(bound.convert_to<double>());
    EXPECT_NEAR(lg / n, target, 0.05) << n;
  }
}

TEST(MV, CheckExamples) {
  EXPECT_TRUE(check_mv(MVFamily::make(2, {{1, 1, 0}, {0, 1, 1}}, {{1, 1, 0}, {0, 1, 1}})));
  EXPECT_FALSE(check_mv(MVFamily::make(2, {{1, 1, 0}, {1, 1, 0}}, {{1, 1, 0}, {1, 1, 0}})));
  EXPECT_TRUE(check_mv(MVFamily::make(3, {}, {})));
  EXPECT_THROW(MVFamily::make(2, {{1, 1}, {1}}, {{1, 1}, {1, 1}}), MirrorError);
  EXPECT_THROW(MVFamily::make(2, {{1, 1}}, {}), MirrorError);
}

TEST(MV, FromModtownExamples) {
  const auto mv = modtown_to_mv(SetFamily::from_lists(3, {{1, 2}, {1, 3}, {2, 3}}), 2);
  IntMatrix expect(3, 3);
  expect << 1, 1, 0, 1, 0, 1, 0, 1, 1;
  EXPECT_EQ(mv.U, expect);
  EXPECT_EQ(mv.V, expect);
  EXPECT_TRUE(check_mv(mv));
  EXPECT_THROW(modtown_to_mv(SetFamily::from_lists(4, {{1, 2}, {3, 4}}), 2), MirrorError);
  const auto single = modtown_to_mv(SetFamily::from_lists(2, {{1, 2}}), 2);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_TRUE(check_mv(single));
}

TEST(Matrices, GramHoldsIntersections) {
  const auto f = SetFamily::from_lists(5, {{1, 2, 3}, {3, 4}, {5}});
  const auto g = gram_matrix<int>(f);
  EXPECT_EQ(g(0, 0), 3);
  EXPECT_EQ(g(0, 1), 1);
  EXPECT_EQ(g(1, 2), 0);
  EXPECT_EQ(incidence_matrix<double>(f).sum(), 6.0);
}
