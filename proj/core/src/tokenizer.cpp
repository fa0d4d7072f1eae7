#include "discoreward/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>

#include "discoreward/error.hpp"

namespace discoreward {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;
};

// Malformed sequences decode as a single byte so offsets always advance.
CodePoint decode_utf8(std::string_view text, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) return {lead, 1};
  std::size_t length = 0;
  char32_t value = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2;
    value = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3;
    value = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4;
    value = lead & 0x07;
  } else {
    return {lead, 1};
  }
  if (pos + length > text.size()) return {lead, 1};
  for (std::size_t i = 1; i < length; ++i) {
    const auto cont = static_cast<unsigned char>(text[pos + i]);
    if ((cont & 0xC0) != 0x80) return {lead, 1};
    value = (value << 6) | (cont & 0x3F);
  }
  return {value, length};
}

bool is_unicode_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_ascii_punct(char32_t c) {
  return c < 0x80 && std::ispunct(static_cast<int>(c)) != 0;
}

}  // namespace

TokenSequence::TokenSequence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].span.empty()) {
      throw Error(ErrorCode::kInvariantViolation,
                  "token " + std::to_string(i) + " has an empty span");
    }
    if (i > 0 && tokens_[i].span.begin < tokens_[i - 1].span.end) {
      throw Error(ErrorCode::kInvariantViolation,
                  "token " + std::to_string(i) + " overlaps or precedes token " +
                      std::to_string(i - 1));
    }
  }
}

TokenSequence TokenSequence::from_offsets(std::string_view text,
                                          std::span<const CharRange> offsets) {
  std::vector<Token> tokens;
  tokens.reserve(offsets.size());
  for (const auto& span : offsets) {
    if (span.end > text.size() || span.begin >= span.end) {
      throw Error(ErrorCode::kInvariantViolation,
                  "token offset [" + std::to_string(span.begin) + "," +
                      std::to_string(span.end) + ") is empty or outside the text");
    }
    tokens.push_back({std::string(text.substr(span.begin, span.size())), span});
  }
  return TokenSequence(std::move(tokens));
}

std::vector<CharRange> TokenSequence::offsets() const {
  std::vector<CharRange> out;
  out.reserve(tokens_.size());
  for (const auto& t : tokens_) out.push_back(t.span);
  return out;
}

TokenRange TokenSequence::tokens_starting_in(const CharRange& chars) const {
  const auto first = std::lower_bound(
      tokens_.begin(), tokens_.end(), chars.begin,
      [](const Token& t, std::size_t pos) { return t.span.begin < pos; });
  const auto last = std::lower_bound(
      first, tokens_.end(), chars.end,
      [](const Token& t, std::size_t pos) { return t.span.begin < pos; });
  return {static_cast<std::size_t>(first - tokens_.begin()),
          static_cast<std::size_t>(last - tokens_.begin())};
}

TokenSequence tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t word_start = std::string_view::npos;
  auto flush = [&](std::size_t end) {
    if (word_start != std::string_view::npos) {
      tokens.push_back({std::string(text.substr(word_start, end - word_start)),
                        {word_start, end}});
      word_start = std::string_view::npos;
    }
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const CodePoint cp = decode_utf8(text, pos);
    if (is_unicode_space(cp.value)) {
      flush(pos);
    } else if (is_ascii_punct(cp.value)) {
      flush(pos);
      tokens.push_back({std::string(text.substr(pos, cp.length)), {pos, pos + cp.length}});
    } else if (word_start == std::string_view::npos) {
      word_start = pos;
    }
    pos += cp.length;
  }
  flush(text.size());
  return TokenSequence(std::move(tokens));
}

}  // namespace discoreward
