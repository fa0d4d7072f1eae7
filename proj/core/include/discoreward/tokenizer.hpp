#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discoreward/text_span.hpp"

namespace discoreward {

struct Token {
  std::string text;
  CharRange span;

  friend bool operator==(const Token&, const Token&) = default;
};

// Ordered, non-overlapping tokens over one source text.
class TokenSequence {
 public:
  TokenSequence() = default;
  explicit TokenSequence(std::vector<Token> tokens);

  // Builds tokens from caller-supplied [begin, end) offsets, e.g. the offsets
  // of an upstream subword tokenizer. Throws kInvariantViolation when offsets
  // are out of bounds, empty, unordered or overlapping.
  static TokenSequence from_offsets(std::string_view text,
                                    std::span<const CharRange> offsets);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  auto begin() const noexcept { return tokens_.begin(); }
  auto end() const noexcept { return tokens_.end(); }

  std::vector<CharRange> offsets() const;

  // Indices of the tokens whose start offset lies inside `chars`.
  TokenRange tokens_starting_in(const CharRange& chars) const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<Token> tokens_;
};

// Fallback tokenizer used when no external offsets are available: splits on
// Unicode whitespace and emits every ASCII punctuation character as its own
// token. Non-ASCII code points are treated as word characters.
TokenSequence tokenize(std::string_view text);

}  // namespace discoreward
