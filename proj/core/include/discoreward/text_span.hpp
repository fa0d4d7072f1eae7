#pragma once

#include <cstddef>

namespace discoreward {

// Half-open [begin, end) interval. Character offsets are UTF-8 byte offsets
// into the source text.
struct CharRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  constexpr std::size_t size() const noexcept { return end - begin; }
  constexpr bool empty() const noexcept { return end <= begin; }
  constexpr bool contains(const CharRange& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend constexpr bool operator==(const CharRange&, const CharRange&) = default;
};

// Half-open [begin, end) interval of token indices.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  constexpr std::size_t size() const noexcept { return end - begin; }
  friend constexpr bool operator==(const TokenRange&, const TokenRange&) = default;
};

constexpr std::size_t overlap(const CharRange& a, const CharRange& b) noexcept {
  const std::size_t lo = a.begin > b.begin ? a.begin : b.begin;
  const std::size_t hi = a.end < b.end ? a.end : b.end;
  return hi > lo ? hi - lo : 0;
}

}  // namespace discoreward
