#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace bnsl {

// Maximum number of nodes/variables supported by the bitset representation.
inline constexpr int kMaxNodes = 64;

// A set of node indices in [0, 64), stored as a bit mask.
class NodeSet {
 public:
  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}
  constexpr NodeSet(std::initializer_list<int> nodes) {
    for (int v : nodes) insert(v);
  }

  static constexpr NodeSet single(int v) { return NodeSet(std::uint64_t{1} << v); }
  // {0, ..., n-1}
  static constexpr NodeSet range(int n) {
    return NodeSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int v) const { return (bits_ >> v) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr void insert(int v) { bits_ |= std::uint64_t{1} << v; }
  constexpr void erase(int v) { bits_ &= ~(std::uint64_t{1} << v); }
  // Smallest element; the set must be non-empty.
  constexpr int front() const { return std::countr_zero(bits_); }

  constexpr bool is_subset_of(NodeSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(NodeSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr NodeSet operator|(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
  constexpr NodeSet operator&(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
  constexpr NodeSet operator-(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }
  constexpr NodeSet& operator|=(NodeSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr NodeSet& operator&=(NodeSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr NodeSet& operator-=(NodeSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  constexpr auto operator<=>(const NodeSet&) const = default;

  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<int> to_vector() const { return {begin(), end()}; }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace bnsl

template <>
struct std::hash<bnsl::NodeSet> {
  std::size_t operator()(bnsl::NodeSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
