#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mirror/bits.hpp"
#include "mirror/error.hpp"

namespace mirror {

/// Arithmetic in F_q for a prime q < 2^32.
class PrimeField {
 public:
  using Element = std::uint64_t;

  explicit PrimeField(std::uint64_t q);

  std::uint64_t modulus() const noexcept { return q_; }
  unsigned element_bits() const noexcept { return ceil_log2(q_); }

  Element reduce(std::int64_t x) const noexcept {
    const auto q = static_cast<std::int64_t>(q_);
    const std::int64_t r = x % q;
    return static_cast<Element>(r < 0 ? r + q : r);
  }
  Element add(Element x, Element y) const noexcept {
    const Element s = x + y;
    return s >= q_ ? s - q_ : s;
  }
  Element sub(Element x, Element y) const noexcept { return x >= y ? x - y : x + q_ - y; }
  Element mul(Element x, Element y) const noexcept { return (x * y) % q_; }
  Element pow(Element x, std::uint64_t e) const noexcept;
  /// Inverse of a nonzero element via Fermat.
  Element inv(Element x) const noexcept { return pow(x, q_ - 2); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t q_;
};

bool is_prime(std::uint64_t x);

/// Smallest prime in (n, 2n]. Throws OutOfRange for n < 2 or n >= 2^31.
PrimeField select_prime(std::uint64_t n);

/// The first k power sums of a streamed subset of [n], reduced mod q.
class PowerSumSketch {
 public:
  PowerSumSketch(std::uint64_t n, std::size_t k);
  PowerSumSketch(std::uint64_t n, std::size_t k, PrimeField field);

  /// Adds x^i to sums[i] for i = 1..k. Throws OutOfRange unless 1 <= x <= n.
  void ingest(std::uint64_t x);

  /// Linearity: the sketch of a disjoint union is the elementwise sum.
  PowerSumSketch& operator+=(const PowerSumSketch& other);

  const PrimeField& field() const noexcept { return field_; }
  std::uint64_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return sums_.size(); }
  std::uint64_t count() const noexcept { return count_; }
  /// sums()[i - 1] holds the i-th power sum.
  std::span<const PrimeField::Element> sums() const noexcept { return sums_; }

  /// k field elements plus the element counter.
  std::size_t encoded_bits() const noexcept {
    return sums_.size() * field_.element_bits() + bits_for(n_);
  }
  void encode(StateEncoder& enc) const;

  friend bool operator==(const PowerSumSketch&, const PowerSumSketch&) = default;

 private:
  PrimeField field_;
  std::uint64_t n_;
  std::vector<PrimeField::Element> sums_;
  std::uint64_t count_ = 0;
};

/// Newton's identities: i * e_i = sum_{j=1..i} (-1)^(j-1) e_{i-j} p_j with
/// e_0 = 1. Input p[i-1] = p_i, output e[i-1] = e_i. Throws DegenerateModulus
/// when k >= q.
std::vector<PrimeField::Element> elementary_from_power(std::span<const PrimeField::Element> p,
                                                       const PrimeField& field);

/// Returns the `missing` elements of [n] that were never streamed into the
/// sketch, in increasing order. Uses the first `missing` power sums only, so
/// the sketch may track more. Throws InconsistentSketch if the resulting
/// polynomial does not have exactly `missing` roots in [n].
std::vector<std::uint64_t> recover_missing(const PowerSumSketch& seen, std::uint64_t n,
                                           std::size_t missing);

}  // namespace mirror
