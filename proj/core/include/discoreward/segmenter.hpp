#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "discoreward/text_span.hpp"
#include "discoreward/tokenizer.hpp"

namespace discoreward {

struct TextSegment {
  CharRange chars;
  TokenRange tokens;

  friend bool operator==(const TextSegment&, const TextSegment&) = default;
};

// Packs whole paragraphs (separated by at least one blank line) greedily into
// segments of at most `budget` tokens. A segment is closed only once it holds
// at least `floor` tokens; when the next paragraph does not fit a segment that
// is still below the floor, the paragraph is split at sentence boundaries and,
// failing that, hard-split at the budget. Paragraphs longer than the budget
// are always broken into sentences first.
//
// The returned char ranges partition [0, text.size()): each segment after the
// first starts at its first token. Throws kEmptyDocument when there are no
// tokens and kInvalidArgument unless budget >= floor >= 1.
std::vector<TextSegment> segment_text(std::string_view text, const TokenSequence& tokens,
                                      std::size_t budget = 512, std::size_t floor = 400);

}  // namespace discoreward
