#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace critset {

/// Fixed 128-slot bit mask over cell indices. Wide enough for any supported
/// grid (81 cells) and for generic hitting-set universes.
struct CellMask {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static constexpr int kCapacity = 128;

  constexpr void set(int i) {
    if (i < 64) lo |= std::uint64_t{1} << i;
    else hi |= std::uint64_t{1} << (i - 64);
  }
  constexpr void reset(int i) {
    if (i < 64) lo &= ~(std::uint64_t{1} << i);
    else hi &= ~(std::uint64_t{1} << (i - 64));
  }
  [[nodiscard]] constexpr bool test(int i) const {
    return i < 64 ? (lo >> i) & 1u : (hi >> (i - 64)) & 1u;
  }
  [[nodiscard]] constexpr int count() const { return std::popcount(lo) + std::popcount(hi); }
  [[nodiscard]] constexpr bool empty() const { return (lo | hi) == 0; }
  [[nodiscard]] constexpr bool intersects(const CellMask& o) const {
    return ((lo & o.lo) | (hi & o.hi)) != 0;
  }
  [[nodiscard]] constexpr bool subset_of(const CellMask& o) const {
    return (lo & ~o.lo) == 0 && (hi & ~o.hi) == 0;
  }
  /// Lowest set index, or -1.
  [[nodiscard]] constexpr int first() const {
    if (lo) return std::countr_zero(lo);
    if (hi) return 64 + std::countr_zero(hi);
    return -1;
  }

  /// Mask with the low `n` slots set.
  static constexpr CellMask low_bits(int n) {
    CellMask m;
    if (n >= 128) {
      m.lo = m.hi = ~std::uint64_t{0};
    } else if (n >= 64) {
      m.lo = ~std::uint64_t{0};
      m.hi = n == 64 ? 0 : (~std::uint64_t{0} >> (128 - n));
    } else if (n > 0) {
      m.lo = ~std::uint64_t{0} >> (64 - n);
    }
    return m;
  }

  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t w = lo; w; w &= w - 1) f(std::countr_zero(w));
    for (std::uint64_t w = hi; w; w &= w - 1) f(64 + std::countr_zero(w));
  }

  [[nodiscard]] std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  friend constexpr CellMask operator|(CellMask a, const CellMask& b) { return {a.lo | b.lo, a.hi | b.hi}; }
  friend constexpr CellMask operator&(CellMask a, const CellMask& b) { return {a.lo & b.lo, a.hi & b.hi}; }
  friend constexpr CellMask operator^(CellMask a, const CellMask& b) { return {a.lo ^ b.lo, a.hi ^ b.hi}; }
  constexpr CellMask operator~() const { return {~lo, ~hi}; }
  constexpr CellMask& operator|=(const CellMask& b) { lo |= b.lo; hi |= b.hi; return *this; }
  constexpr CellMask& operator&=(const CellMask& b) { lo &= b.lo; hi &= b.hi; return *this; }
  friend constexpr bool operator==(const CellMask&, const CellMask&) = default;

};

/// Orders equal-size masks by ascending cell-index sequence.
inline bool index_order_less(const CellMask& a, const CellMask& b) {
  int i = (a ^ b).first();
  // The set holding the lowest differing index comes first.
  return i >= 0 && a.test(i);
}

/// Variable-length bit row with one slot per family member.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  [[nodiscard]] std::size_t size() const { return bits_; }
  [[nodiscard]] std::size_t word_count() const { return words_.size(); }
  [[nodiscard]] std::span<std::uint64_t> words() { return words_; }
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  [[nodiscard]] bool all() const { return all_ones(words_, bits_); }
  [[nodiscard]] bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  BitRow& operator|=(const BitRow& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend bool operator==(const BitRow&, const BitRow&) = default;

  /// True iff the first `bits` slots of `w` are all ones.
  static bool all_ones(std::span<const std::uint64_t> w, std::size_t bits) {
    std::size_t full = bits / 64;
    for (std::size_t i = 0; i < full; ++i)
      if (w[i] != ~std::uint64_t{0}) return false;
    std::size_t rem = bits % 64;
    if (rem == 0) return true;
    std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
    return (w[full] & mask) == mask;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace critset
