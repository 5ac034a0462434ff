#include "mirror/streamrec.hpp"

#include <string>

namespace mirror {

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
  if (q < 2 || q >= (1ULL << 32) || !is_prime(q)) {
    throw MirrorError(ErrorCode::DegenerateModulus, std::to_string(q) + " is not a usable prime");
  }
}

PrimeField::Element PrimeField::pow(Element x, std::uint64_t e) const noexcept {
  Element result = 1 % q_;
  Element base = x % q_;
  while (e > 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  if (x % 2 == 0) return x == 2;
  for (std::uint64_t d = 3; d * d <= x; d += 2) {
    if (x % d == 0) return false;
  }
  return true;
}

PrimeField select_prime(std::uint64_t n) {
  if (n < 2 || n >= (1ULL << 31)) {
    throw MirrorError(ErrorCode::OutOfRange, "prime selection needs 2 <= n < 2^31");
  }
  for (std::uint64_t q = n + 1; q <= 2 * n; ++q) {
    if (is_prime(q)) return PrimeField(q);
  }
  // Bertrand's postulate makes this unreachable.
  throw MirrorError(ErrorCode::DegenerateModulus, "no prime in (n, 2n]");
}

PowerSumSketch::PowerSumSketch(std::uint64_t n, std::size_t k)
    : PowerSumSketch(n, k, select_prime(n)) {}

PowerSumSketch::PowerSumSketch(std::uint64_t n, std::size_t k, PrimeField field)
    : field_(field), n_(n), sums_(k, 0) {}

void PowerSumSketch::ingest(std::uint64_t x) {
  if (x < 1 || x > n_) {
    throw MirrorError(ErrorCode::OutOfRange,
                      std::to_string(x) + " is outside [1, " + std::to_string(n_) + "]");
  }
  const auto base = x % field_.modulus();
  PrimeField::Element power = base;
  for (auto& s : sums_) {
    s = field_.add(s, power);
    power = field_.mul(power, base);
  }
  ++count_;
}

PowerSumSketch& PowerSumSketch::operator+=(const PowerSumSketch& other) {
  if (!(other.field_ == field_) || other.sums_.size() != sums_.size() || other.n_ != n_) {
    throw MirrorError(ErrorCode::DimensionMismatch, "sketches over different parameters");
  }
  for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] = field_.add(sums_[i], other.sums_[i]);
  count_ += other.count_;
  return *this;
}

void PowerSumSketch::encode(StateEncoder& enc) const {
  const unsigned width = field_.element_bits();
  for (const auto s : sums_) enc.put(s, width);
  enc.put(count_, bits_for(n_));
}

std::vector<PrimeField::Element> elementary_from_power(std::span<const PrimeField::Element> p,
                                                       const PrimeField& field) {
  const std::size_t k = p.size();
  if (k >= field.modulus()) {
    throw MirrorError(ErrorCode::DegenerateModulus,
                      "k = " + std::to_string(k) + " >= q = " + std::to_string(field.modulus()));
  }
  std::vector<PrimeField::Element> inverse(k + 1, 0);
  for (std::size_t i = 1; i <= k; ++i) inverse[i] = field.inv(i);

  // e[0] = 1; e[i] for i >= 1 is the i-th elementary symmetric polynomial.
  std::vector<PrimeField::Element> e(k + 1, 0);
  e[0] = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    PrimeField::Element acc = 0;
    for (std::size_t j = 1; j <= i; ++j) {
      const auto term = field.mul(e[i - j], p[j - 1] % field.modulus());
      acc = (j % 2 == 1) ? field.add(acc, term) : field.sub(acc, term);
    }
    e[i] = field.mul(acc, inverse[i]);
  }
  return {e.begin() + 1, e.end()};
}

std::vector<std::uint64_t> recover_missing(const PowerSumSketch& seen, std::uint64_t n,
                                           std::size_t missing) {
  if (missing > seen.k()) {
    throw MirrorError(ErrorCode::InconsistentSketch,
                      "sketch tracks " + std::to_string(seen.k()) + " sums, " +
                          std::to_string(missing) + " requested");
  }
  if (n != seen.n()) {
    throw MirrorError(ErrorCode::InconsistentSketch, "sketch was built for a different n");
  }
  if (missing == 0) return {};

  const PrimeField& f = seen.field();

  // p_i([n] \ S) = p_i([n]) - p_i(S)
  std::vector<PrimeField::Element> p(missing, 0);
  for (std::uint64_t x = 1; x <= n; ++x) {
    PrimeField::Element power = x;
    for (std::size_t i = 0; i < missing; ++i) {
      p[i] = f.add(p[i], power);
      power = f.mul(power, x);
    }
  }
  const auto seen_sums = seen.sums();
  for (std::size_t i = 0; i < missing; ++i) p[i] = f.sub(p[i], seen_sums[i]);

  const auto e = elementary_from_power(p, f);

  // Coefficients of x^k - e1 x^(k-1) + e2 x^(k-2) - ... , highest degree first.
  std::vector<PrimeField::Element> coeff(missing + 1);
  coeff[0] = 1;
  for (std::size_t i = 1; i <= missing; ++i) {
    coeff[i] = (i % 2 == 1) ? f.sub(0, e[i - 1]) : e[i - 1];
  }

  std::vector<std::uint64_t> roots;
  for (std::uint64_t x = 1; x <= n; ++x) {
    PrimeField::Element acc = 0;
    for (const auto c : coeff) acc = f.add(f.mul(acc, x), c);
    if (acc == 0) {
      roots.push_back(x);
      if (roots.size() > missing) break;
    }
  }
  if (roots.size() != missing) {
    throw MirrorError(ErrorCode::InconsistentSketch,
                      "expected " + std::to_string(missing) + " roots, found " +
                          std::to_string(roots.size()) + (roots.size() > missing ? "+" : ""));
  }
  return roots;
}

}  // namespace mirror
