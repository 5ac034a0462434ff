#include "mirror/setfam.hpp"

#include <algorithm>
#include <bitset>
#include <charconv>
#include <set>

namespace mirror {

Mask mask_of(std::span<const int> elements) {
  Mask m = 0;
  for (const int x : elements) {
    if (x < 1 || x > 64) throw MirrorError(ErrorCode::OutOfRange, "element outside [1, 64]");
    m |= Mask{1} << (x - 1);
  }
  return m;
}

std::vector<int> elements_of(Mask s) {
  std::vector<int> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s) + 1);
    s &= s - 1;
  }
  return out;
}

SetFamily SetFamily::make(int ground_n, std::vector<Mask> sets) {
  if (ground_n < 0 || ground_n > 64) {
    throw MirrorError(ErrorCode::TooLarge, "ground set must have at most 64 elements");
  }
  const Mask universe = ground_n == 64 ? ~Mask{0} : (Mask{1} << ground_n) - 1;
  std::set<Mask> seen;
  for (const Mask s : sets) {
    if ((s & ~universe) != 0) {
      throw MirrorError(ErrorCode::OutOfRange, "set has elements beyond n = " +
                                                   std::to_string(ground_n));
    }
    if (!seen.insert(s).second) {
      throw MirrorError(ErrorCode::InvalidConfig, "family contains a repeated set");
    }
  }
  return SetFamily{ground_n, std::move(sets)};
}

SetFamily SetFamily::from_lists(int ground_n, const std::vector<std::vector<int>>& sets) {
  std::vector<Mask> masks;
  masks.reserve(sets.size());
  for (const auto& s : sets) {
    for (const int x : s) {
      if (x < 1 || x > ground_n) {
        throw MirrorError(ErrorCode::OutOfRange, "element " + std::to_string(x) +
                                                     " outside [1, " + std::to_string(ground_n) +
                                                     "]");
      }
    }
    const Mask m = mask_of(s);
    if (static_cast<std::size_t>(cardinality(m)) != s.size()) {
      throw MirrorError(ErrorCode::InvalidConfig, "set lists an element twice");
    }
    masks.push_back(m);
  }
  return make(ground_n, std::move(masks));
}

std::vector<std::vector<int>> SetFamily::to_lists() const {
  std::vector<std::vector<int>> out;
  out.reserve(sets.size());
  for (const Mask s : sets) out.push_back(elements_of(s));
  return out;
}

nlohmann::json to_json(const SetFamily& family) {
  return nlohmann::json{{"n", family.ground_n}, {"sets", family.to_lists()}};
}

SetFamily family_from_json(const nlohmann::json& j) {
  return SetFamily::from_lists(j.at("n").get<int>(),
                               j.at("sets").get<std::vector<std::vector<int>>>());
}

TownKind parse_town_kind(std::string_view text) {
  if (text == "odd-even") return {Parity::Odd, Parity::Even};
  if (text == "even-odd") return {Parity::Even, Parity::Odd};
  if (text == "even-even") return {Parity::Even, Parity::Even};
  if (text == "odd-odd") return {Parity::Odd, Parity::Odd};
  throw MirrorError(ErrorCode::InvalidConfig, "unknown town kind '" + std::string(text) + "'");
}

std::string to_string(TownKind kind) {
  auto word = [](Parity p) { return p == Parity::Odd ? std::string("odd") : std::string("even"); };
  return word(kind.set_parity) + "-" + word(kind.intersection_parity);
}

ModtownSpec ModtownSpec::make(int p, std::vector<int> L) {
  if (p < 2) throw MirrorError(ErrorCode::InvalidConfig, "modtown modulus must be >= 2");
  std::sort(L.begin(), L.end());
  L.erase(std::unique(L.begin(), L.end()), L.end());
  for (const int l : L) {
    if (l < 0 || l >= p) {
      throw MirrorError(ErrorCode::InvalidConfig, "residue " + std::to_string(l) +
                                                      " outside {0.." + std::to_string(p - 1) +
                                                      "}");
    }
  }
  return ModtownSpec{p, std::move(L)};
}

ModtownSpec parse_modtown_spec(std::string_view text) {
  std::vector<int> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw MirrorError(ErrorCode::InvalidConfig, "bad modtown spec; expected p,l1,l2,...");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (values.empty()) throw MirrorError(ErrorCode::InvalidConfig, "modtown spec needs p");
  return ModtownSpec::make(values.front(), {values.begin() + 1, values.end()});
}

namespace {

constexpr int parity_value(Parity p) { return p == Parity::Odd ? 1 : 0; }

std::int64_t mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

bool check_town(const SetFamily& family, TownKind kind) {
  const IntMatrix g = gram_matrix<std::int64_t>(family);
  const int want_set = parity_value(kind.set_parity);
  const int want_meet = parity_value(kind.intersection_parity);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (g(i, i) % 2 != want_set) return false;
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) {
      if (g(i, j) % 2 != want_meet) return false;
    }
  }
  return true;
}

bool check_modtown(const SetFamily& family, const ModtownSpec& spec) {
  const IntMatrix g = gram_matrix<std::int64_t>(family);
  auto in_L = [&](std::int64_t v) {
    return std::binary_search(spec.L.begin(), spec.L.end(), static_cast<int>(mod(v, spec.p)));
  };
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (in_L(g(i, i))) return false;
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) {
      if (!in_L(g(i, j))) return false;
    }
  }
  return true;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

BigInt frankl_wilson_bound(int n, int s) {
  if (s < 0 || s > n) {
    throw MirrorError(ErrorCode::OutOfRange, "frankl_wilson_bound needs 0 <= s <= n");
  }
  BigInt total = 0;
  for (int i = 0; i <= s; ++i) total += binomial(n, i);
  return total;
}

// --- maximum clique --------------------------------------------------------

namespace {

constexpr std::size_t kMaxVertices = 256;
using VertexSet = std::bitset<kMaxVertices>;

/// Branch-and-bound maximum clique with greedy colouring bounds.
class CliqueSearch {
 public:
  explicit CliqueSearch(std::vector<VertexSet> adjacency) : adj_(std::move(adjacency)) {}

  std::vector<int> run() {
    std::vector<int> all(adj_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<int> current;
    expand(current, all);
    return best_;
  }

 private:
  void colour_sort(const std::vector<int>& p, std::vector<int>& order,
                   std::vector<int>& colour) const {
    order.clear();
    colour.clear();
    std::vector<int> uncoloured = p;
    int c = 0;
    while (!uncoloured.empty()) {
      ++c;
      std::vector<int> rest;
      VertexSet used;
      for (const int v : uncoloured) {
        if ((adj_[static_cast<std::size_t>(v)] & used).none()) {
          used.set(static_cast<std::size_t>(v));
          order.push_back(v);
          colour.push_back(c);
        } else {
          rest.push_back(v);
        }
      }
      uncoloured.swap(rest);
    }
  }

  void expand(std::vector<int>& current, std::vector<int> p) {
    std::vector<int> order;
    std::vector<int> colour;
    colour_sort(p, order, colour);
    VertexSet remaining;
    for (const int v : order) remaining.set(static_cast<std::size_t>(v));

    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + static_cast<std::size_t>(colour[i]) <= best_.size()) return;
      const int v = order[i];
      current.push_back(v);
      std::vector<int> next;
      for (std::size_t j = 0; j < i; ++j) {
        const int u = order[j];
        if (remaining.test(static_cast<std::size_t>(u)) &&
            adj_[static_cast<std::size_t>(v)].test(static_cast<std::size_t>(u))) {
          next.push_back(u);
        }
      }
      if (next.empty()) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(current, std::move(next));
      }
      current.pop_back();
      remaining.reset(static_cast<std::size_t>(v));
    }
  }

  std::vector<VertexSet> adj_;
  std::vector<int> best_;
};

std::vector<Mask> eligible_sets(int n, TownKind kind, bool include_empty) {
  std::vector<Mask> out;
  const int want = parity_value(kind.set_parity);
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    if (s == 0 && !include_empty) continue;
    if (cardinality(s) % 2 == want) out.push_back(s);
  }
  return out;
}

std::vector<VertexSet> compatibility(const std::vector<Mask>& vertices, TownKind kind) {
  const int want = parity_value(kind.intersection_parity);
  std::vector<VertexSet> adj(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (cardinality(vertices[i] & vertices[j]) % 2 == want) {
        adj[i].set(j);
        adj[j].set(i);
      }
    }
  }
  return adj;
}

std::vector<Mask> largest_town(int n, TownKind kind, bool include_empty) {
  const auto vertices = eligible_sets(n, kind, include_empty);
  if (vertices.empty()) return {};
  const auto clique = CliqueSearch(compatibility(vertices, kind)).run();
  std::vector<Mask> sets;
  for (const int v : clique) sets.push_back(vertices[static_cast<std::size_t>(v)]);
  std::sort(sets.begin(), sets.end());
  return sets;
}

}  // namespace

TownSearchResult search_max_town(int n, TownKind kind, int limit) {
  if (n < 1) throw MirrorError(ErrorCode::OutOfRange, "search_max_town needs n >= 1");
  if (n > limit || n > 8) {
    throw MirrorError(ErrorCode::TooLarge, "exhaustive town search is limited to n <= " +
                                               std::to_string(std::min(limit, 8)));
  }
  TownSearchResult result;
  const auto with_empty = largest_town(n, kind, /*include_empty=*/true);
  result.max_size = with_empty.size();
  result.witness = SetFamily::make(n, with_empty);
  result.max_size_without_empty =
      kind.set_parity == Parity::Odd ? with_empty.size()
                                     : largest_town(n, kind, /*include_empty=*/false).size();
  return result;
}

std::size_t max_town_size(int n, TownKind kind, int limit) {
  return search_max_town(n, kind, limit).max_size;
}

void for_each_town(int n, TownKind kind, const std::function<void(const SetFamily&)>& visit) {
  if (n < 1 || n > 6) throw MirrorError(ErrorCode::TooLarge, "for_each_town needs 1 <= n <= 6");
  const auto vertices = eligible_sets(n, kind, /*include_empty=*/true);
  const auto adj = compatibility(vertices, kind);

  std::vector<int> chosen;
  std::function<void(std::size_t, const VertexSet&)> grow = [&](std::size_t from,
                                                               const VertexSet& allowed) {
    for (std::size_t v = from; v < vertices.size(); ++v) {
      if (!allowed.test(v)) continue;
      chosen.push_back(static_cast<int>(v));
      std::vector<Mask> sets;
      for (const int c : chosen) sets.push_back(vertices[static_cast<std::size_t>(c)]);
      visit(SetFamily{n, std::move(sets)});
      grow(v + 1, allowed & adj[v]);
      chosen.pop_back();
    }
  };
  VertexSet all;
  for (std::size_t v = 0; v < vertices.size(); ++v) all.set(v);
  grow(0, all);
}

SetFamily eventown_pairing(int n) {
  if (n < 2 || n % 2 != 0) {
    throw MirrorError(ErrorCode::OddN, "eventown_pairing needs an even n, got " +
                                           std::to_string(n));
  }
  if (n > 40) throw MirrorError(ErrorCode::TooLarge, "eventown_pairing is limited to n <= 40");
  const int pairs = n / 2;
  std::vector<Mask> sets;
  sets.reserve(std::size_t{1} << pairs);
  for (Mask choice = 0; choice < (Mask{1} << pairs); ++choice) {
    Mask s = 0;
    for (int i = 0; i < pairs; ++i) {
      if ((choice >> i) & 1u) s |= Mask{3} << (2 * i);
    }
    sets.push_back(s);
  }
  return SetFamily{n, std::move(sets)};
}

bool check_covering(const SetFamily& collection, int p, int r) {
  const int n = collection.ground_n;
  if (r < 0 || p < 1 || r > n) {
    throw MirrorError(ErrorCode::OutOfRange, "check_covering needs 0 <= r <= n, p >= 1");
  }
  if (n > 63) throw MirrorError(ErrorCode::TooLarge, "check_covering needs n <= 63");
  if (binomial(n, r) > 100'000'000) {
    throw MirrorError(ErrorCode::TooLarge, "too many r-subsets to enumerate");
  }
  for (const Mask s : collection.sets) {
    if (cardinality(s) != p * r) return false;
  }
  if (r == 0) return !collection.sets.empty();

  // Gosper's hack over all r-subsets of [n]; n <= 63 keeps `ripple` in range.
  const Mask limit = Mask{1} << n;
  for (Mask t = (Mask{1} << r) - 1; t < limit;) {
    const bool covered = std::any_of(collection.sets.begin(), collection.sets.end(),
                                     [t](Mask s) { return (t & ~s) == 0; });
    if (!covered) return false;
    const Mask low = t & (~t + 1);
    const Mask ripple = t + low;
    t = (((ripple ^ t) >> 2) / low) | ripple;
  }
  return true;
}

BigInt covering_lower_bound(int n, int p, int r) {
  if (p < 1 || r < 0 || p * r > n) {
    throw MirrorError(ErrorCode::OutOfRange, "covering_lower_bound needs p r <= n");
  }
  const BigInt total = binomial(n, r);
  const BigInt per_member = binomial(p * r, r);
  return (total + per_member - 1) / per_member;
}

// --- matching vector families ----------------------------------------------

MVFamily MVFamily::make(int m, const std::vector<std::vector<std::int64_t>>& U,
                        const std::vector<std::vector<std::int64_t>>& V) {
  if (m < 2) throw MirrorError(ErrorCode::InvalidConfig, "modulus must be >= 2");
  if (U.size() != V.size()) {
    throw MirrorError(ErrorCode::DimensionMismatch, "|U| != |V|");
  }
  const std::size_t dim = U.empty() ? 0 : U.front().size();
  auto fill = [&](const std::vector<std::vector<std::int64_t>>& rows) {
    IntMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != dim) {
        throw MirrorError(ErrorCode::DimensionMismatch, "vectors have different lengths");
      }
      for (std::size_t j = 0; j < dim; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    return out;
  };
  return MVFamily{m, static_cast<int>(dim), fill(U), fill(V)};
}

bool check_mv(const MVFamily& family) {
  if (family.U.rows() != family.V.rows() || family.U.cols() != family.V.cols() ||
      family.U.cols() != family.dim) {
    throw MirrorError(ErrorCode::DimensionMismatch, "U and V must be t x dim");
  }
  const IntMatrix products = family.U * family.V.transpose();
  for (Eigen::Index i = 0; i < products.rows(); ++i) {
    for (Eigen::Index j = 0; j < products.cols(); ++j) {
      const bool zero = mod(products(i, j), family.m) == 0;
      if ((i == j) != zero) return false;
    }
  }
  return true;
}

MVFamily modtown_to_mv(const SetFamily& family, int m) {
  if (m < 2) throw MirrorError(ErrorCode::InvalidConfig, "modulus must be >= 2");
  std::vector<int> nonzero(static_cast<std::size_t>(m - 1));
  for (int i = 1; i < m; ++i) nonzero[static_cast<std::size_t>(i - 1)] = i;
  if (!check_modtown(family, ModtownSpec::make(m, nonzero))) {
    throw MirrorError(ErrorCode::NotModtown,
                      "family needs |S| = 0 and |S1 ∩ S2| != 0 mod " + std::to_string(m));
  }
  const IntMatrix chi = incidence_matrix<std::int64_t>(family);
  return MVFamily{m, family.ground_n, chi, chi};
}

nlohmann::json to_json(const MVFamily& family) {
  auto rows = [](const IntMatrix& mat) {
    std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(mat.rows()));
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) {
        out[static_cast<std::size_t>(i)].push_back(mat(i, j));
      }
    }
    return out;
  };
  return nlohmann::json{{"m", family.m}, {"dim", family.dim}, {"U", rows(family.U)},
                        {"V", rows(family.V)}};
}

}  // namespace mirror
