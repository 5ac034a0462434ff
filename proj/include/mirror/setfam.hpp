#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mirror/error.hpp"

namespace mirror {

using Mask = std::uint64_t;
using BigInt = boost::multiprecision::cpp_int;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using IntMatrix = DenseMatrix<std::int64_t>;

inline int cardinality(Mask s) { return std::popcount(s); }
Mask mask_of(std::span<const int> elements);
inline Mask mask_of(std::initializer_list<int> elements) {
  return mask_of(std::span<const int>(elements.begin(), elements.size()));
}
std::vector<int> elements_of(Mask s);

/// Distinct subsets of [ground_n], ground_n <= 64, one bit per element
/// (element x is bit x-1).
struct SetFamily {
  int ground_n = 0;
  std::vector<Mask> sets;

  /// Throws OutOfRange for elements beyond ground_n and TooLarge for
  /// ground_n > 64; duplicate sets are rejected with InvalidConfig.
  static SetFamily make(int ground_n, std::vector<Mask> sets);
  static SetFamily from_lists(int ground_n, const std::vector<std::vector<int>>& sets);

  std::size_t size() const noexcept { return sets.size(); }
  std::vector<std::vector<int>> to_lists() const;
};

/// Family file format: {"n": int, "sets": [[ints]]}.
nlohmann::json to_json(const SetFamily& family);
SetFamily family_from_json(const nlohmann::json& j);

/// Row i is the characteristic vector of set i.
template <typename Scalar>
DenseMatrix<Scalar> incidence_matrix(const SetFamily& family) {
  DenseMatrix<Scalar> a = DenseMatrix<Scalar>::Zero(static_cast<Eigen::Index>(family.size()),
                                                    family.ground_n);
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (int x = 0; x < family.ground_n; ++x) {
      if ((family.sets[i] >> x) & 1u) a(static_cast<Eigen::Index>(i), x) = Scalar(1);
    }
  }
  return a;
}

/// Entry (i,j) is |F_i ∩ F_j|; the diagonal holds the cardinalities.
template <typename Scalar>
DenseMatrix<Scalar> gram_matrix(const SetFamily& family) {
  const auto a = incidence_matrix<Scalar>(family);
  return a * a.transpose();
}

enum class Parity : std::uint8_t { Even, Odd };

struct TownKind {
  Parity set_parity = Parity::Odd;
  Parity intersection_parity = Parity::Even;

  friend bool operator==(const TownKind&, const TownKind&) = default;
};

/// "odd-even", "even-odd", "even-even", "odd-odd".
TownKind parse_town_kind(std::string_view text);
std::string to_string(TownKind kind);

/// |B| mod p not in L for every member, |B_i ∩ B_j| mod p in L for i != j.
struct ModtownSpec {
  int p = 2;
  std::vector<int> L;

  /// Throws InvalidConfig unless p >= 2 and L ⊆ {0..p-1}.
  static ModtownSpec make(int p, std::vector<int> L);
};

/// "p,l1,l2,..." as used after "modtown:" on the command line.
ModtownSpec parse_modtown_spec(std::string_view text);

bool check_town(const SetFamily& family, TownKind kind);
bool check_modtown(const SetFamily& family, const ModtownSpec& spec);

/// sum_{i=0..s} C(n, i).
BigInt frankl_wilson_bound(int n, int s);
BigInt binomial(int n, int k);

struct TownSearchResult {
  std::size_t max_size = 0;
  std::size_t max_size_without_empty = 0;
  SetFamily witness;
};

/// Largest family of the given kind on [n], by branch-and-bound maximum
/// clique over parity-eligible subsets. The empty set is eligible for even
/// set parity. Throws TooLarge for n > limit.
TownSearchResult search_max_town(int n, TownKind kind, int limit = 8);
std::size_t max_town_size(int n, TownKind kind, int limit = 8);

/// Calls `visit` once for every nonempty family of the given kind on [n].
/// Exponential; throws TooLarge for n > 6.
void for_each_town(int n, TownKind kind, const std::function<void(const SetFamily&)>& visit);

/// All 2^(n/2) unions of the pairs {1,2}, {3,4}, ...; throws OddN for odd n
/// and TooLarge for n > 40.
SetFamily eventown_pairing(int n);

/// Every member has p*r elements and every r-subset of [n] lies inside some
/// member. Throws TooLarge when C(n, r) exceeds 10^8.
bool check_covering(const SetFamily& collection, int p, int r);

/// ceil(C(n, r) / C(p r, r)); throws OutOfRange unless p r <= n.
BigInt covering_lower_bound(int n, int p, int r);

/// Matching vector family over Z_m^dim. Row i of U is u_i, row i of V is v_i.
struct MVFamily {
  int m = 2;
  int dim = 0;
  IntMatrix U;
  IntMatrix V;

  /// Throws DimensionMismatch for ragged or unequal-length lists.
  static MVFamily make(int m, const std::vector<std::vector<std::int64_t>>& U,
                       const std::vector<std::vector<std::int64_t>>& V);
  std::size_t size() const noexcept { return static_cast<std::size_t>(U.rows()); }
};

/// u_i·v_i ≡ 0 and u_i·v_j ≢ 0 (i != j) mod m.
bool check_mv(const MVFamily& family);

/// Characteristic vectors of a family with |S| ≡ 0 and pairwise
/// |S1 ∩ S2| ≢ 0 mod m, used as both U and V. Throws NotModtown otherwise.
MVFamily modtown_to_mv(const SetFamily& family, int m);

nlohmann::json to_json(const MVFamily& family);

}  // namespace mirror
