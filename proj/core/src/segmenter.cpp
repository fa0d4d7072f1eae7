#include "discoreward/segmenter.hpp"

#include <algorithm>
#include <string>

#include "discoreward/error.hpp"

namespace discoreward {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// A blank line: a newline, optional horizontal whitespace, another newline.
bool has_blank_line(std::string_view gap) {
  bool after_newline = false;
  for (char c : gap) {
    if (c == '\n') {
      if (after_newline) return true;
      after_newline = true;
    } else if (!is_space(c)) {
      after_newline = false;
    }
  }
  return false;
}

bool ends_sentence(std::string_view token_text, std::string_view gap) {
  if (token_text.empty() || gap.empty() || !is_space(gap.front())) return false;
  const char last = token_text.back();
  return last == '.' || last == '!' || last == '?';
}

struct Unit {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const { return end - begin; }
};

class Packer {
 public:
  Packer(std::size_t budget, std::size_t floor) : budget_(budget), floor_(floor) {}

  // Sentence-level units of the unit being placed, used when it cannot be
  // placed whole.
  void place(const Unit& unit, const std::vector<Unit>& sentences) {
    if (fill_ + unit.size() <= budget_) {
      fill_ += unit.size();
      return;
    }
    if (fill_ >= floor_) {
      close_at(unit.begin);
      fill_ = unit.size();
      return;
    }
    for (const Unit& s : sentences) place_sentence(s);
  }

  const std::vector<std::size_t>& starts() const { return starts_; }

 private:
  void place_sentence(const Unit& s) {
    if (fill_ + s.size() <= budget_) {
      fill_ += s.size();
    } else if (fill_ >= floor_) {
      close_at(s.begin);
      fill_ = s.size();
    } else {
      const std::size_t take = budget_ - fill_;
      close_at(s.begin + take);
      fill_ = s.size() - take;
    }
  }

  void close_at(std::size_t token) { starts_.push_back(token); }

  std::size_t budget_;
  std::size_t floor_;
  std::size_t fill_ = 0;
  std::vector<std::size_t> starts_{0};
};

// Splits [begin, end) at sentence boundaries, then cuts any sentence longer
// than the budget into budget-sized chunks.
std::vector<Unit> sentence_units(std::size_t begin, std::size_t end,
                                 const std::vector<bool>& sentence_break, std::size_t budget) {
  std::vector<Unit> out;
  std::size_t start = begin;
  auto emit = [&](std::size_t stop) {
    for (std::size_t b = start; b < stop; b += budget) out.push_back({b, std::min(stop, b + budget)});
    start = stop;
  };
  for (std::size_t t = begin + 1; t < end; ++t) {
    if (sentence_break[t]) emit(t);
  }
  emit(end);
  return out;
}

}  // namespace

std::vector<TextSegment> segment_text(std::string_view text, const TokenSequence& tokens,
                                      std::size_t budget, std::size_t floor) {
  if (floor < 1 || budget < floor) {
    throw Error(ErrorCode::kInvalidArgument, "segment_text needs budget >= floor >= 1");
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyDocument, "text has no tokens");

  const std::size_t n = tokens.size();
  std::vector<bool> paragraph_break(n, false);
  std::vector<bool> sentence_break(n, false);
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t gap_begin = tokens[t - 1].span.end;
    const std::string_view gap = text.substr(gap_begin, tokens[t].span.begin - gap_begin);
    paragraph_break[t] = has_blank_line(gap);
    sentence_break[t] = paragraph_break[t] || ends_sentence(tokens[t - 1].text, gap);
  }

  Packer packer(budget, floor);
  std::size_t para_begin = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    if (t < n && !paragraph_break[t]) continue;
    const Unit paragraph{para_begin, t};
    const auto sentences = sentence_units(para_begin, t, sentence_break, budget);
    if (paragraph.size() > budget) {
      for (const Unit& s : sentences) packer.place(s, sentence_units(s.begin, s.end, sentence_break, budget));
    } else {
      packer.place(paragraph, sentences);
    }
    para_begin = t;
  }

  const auto& starts = packer.starts();
  std::vector<TextSegment> out;
  out.reserve(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t tok_end = i + 1 < starts.size() ? starts[i + 1] : n;
    const std::size_t char_begin = i == 0 ? 0 : tokens[starts[i]].span.begin;
    const std::size_t char_end = i + 1 < starts.size() ? tokens[starts[i + 1]].span.begin : text.size();
    out.push_back({{char_begin, char_end}, {starts[i], tok_end}});
  }
  return out;
}

}  // namespace discoreward
