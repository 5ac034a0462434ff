#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mirror {

/// Number of bits needed to write any value in [0, max_value].
constexpr unsigned bits_for(std::uint64_t max_value) noexcept {
  return static_cast<unsigned>(std::bit_width(max_value));
}

/// Ceiling of log2(x) for x >= 1.
constexpr unsigned ceil_log2(std::uint64_t x) noexcept {
  return x <= 1 ? 0u : static_cast<unsigned>(std::bit_width(x - 1));
}

/// Sink for a strategy's canonical state encoding.
///
/// Strategies describe their state as a sequence of fixed-width fields.
/// In counting mode only widths are accumulated, which keeps per-transition
/// budget checks O(number of fields) instead of O(bits).
class StateEncoder {
 public:
  explicit StateEncoder(bool record = false) : record_(record) {}

  void put(std::uint64_t value, unsigned width) {
    if (record_) {
      for (unsigned i = 0; i < width; ++i) bits_.push_back(((value >> i) & 1u) != 0);
    }
    size_ += width;
  }

  void put_flag(bool flag) { put(flag ? 1u : 0u, 1); }

  template <typename Flag>
  void put_bitmap(std::span<const Flag> flags) {
    if (record_) {
      for (const auto f : flags) bits_.push_back(static_cast<bool>(f));
    }
    size_ += flags.size();
  }

  std::size_t size() const noexcept { return size_; }
  const std::vector<bool>& bits() const noexcept { return bits_; }

 private:
  bool record_;
  std::size_t size_ = 0;
  std::vector<bool> bits_;
};

}  // namespace mirror
