#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discoreward/text_span.hpp"
#include "discoreward/tokenizer.hpp"

namespace discoreward {

enum class Nuclearity { kNucleus, kSatellite };

enum class AuthorLabel { kHuman, kMachine, kUnknown };

std::string_view to_string(Nuclearity n) noexcept;
std::string_view to_string(AuthorLabel label) noexcept;

// Elementary discourse unit. `index` is the document-wide ordinal.
struct Edu {
  std::size_t index = 0;
  std::string text;
  CharRange span;

  friend bool operator==(const Edu&, const Edu&) = default;
};

struct DiscourseChild;

// Rooted RST tree node: either a leaf holding a segment-local EDU index or a
// relation over two or more children with nuclearity labels.
class DiscourseNode {
 public:
  static DiscourseNode leaf(std::size_t edu);
  static DiscourseNode relation(std::string label, std::vector<DiscourseChild> children);

  bool is_leaf() const noexcept { return children_.empty(); }
  std::size_t edu() const noexcept { return edu_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<DiscourseChild>& children() const noexcept { return children_; }

  std::size_t node_count() const;
  std::size_t leaf_count() const;

  friend bool operator==(const DiscourseNode&, const DiscourseNode&);

 private:
  std::size_t edu_ = 0;
  std::string label_;
  std::vector<DiscourseChild> children_;
};

struct DiscourseChild {
  Nuclearity nuclearity = Nuclearity::kNucleus;
  DiscourseNode node;

  friend bool operator==(const DiscourseChild&, const DiscourseChild&) = default;
};

inline DiscourseChild nucleus(DiscourseNode node) {
  return {Nuclearity::kNucleus, std::move(node)};
}
inline DiscourseChild satellite(DiscourseNode node) {
  return {Nuclearity::kSatellite, std::move(node)};
}

struct Segment {
  CharRange chars;
  TokenRange tokens;
  std::vector<Edu> edus;
  DiscourseNode tree;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct DiscourseDocument {
  std::string doc_id;
  std::string source_text;
  TokenSequence tokens;
  // True when `tokens` came from caller-supplied offsets rather than the
  // fallback tokenizer; only supplied offsets are serialized.
  bool tokens_supplied = false;
  std::vector<Segment> segments;
  std::optional<AuthorLabel> author_label;

  std::size_t edu_count() const;
  // All EDUs in document order; position i holds the EDU with index i.
  std::vector<Edu> all_edus() const;
  // Document-wide index of the first EDU of segment `segment`.
  std::size_t edu_offset(std::size_t segment) const;

  friend bool operator==(const DiscourseDocument&, const DiscourseDocument&) = default;
};

// Limits applied while validating segment sizes.
struct SegmentPolicy {
  std::size_t budget = 512;
  std::size_t floor = 400;
  // When false, segment token counts are not checked (useful for parser
  // output produced under a different segmentation regime).
  bool enforce = true;
};

struct SegmentSpec {
  CharRange chars;
  std::vector<CharRange> edu_spans;
  DiscourseNode tree;
};

// Assembles and validates a document. EDU texts and segment token ranges are
// derived from the source text; when `token_offsets` is empty the fallback
// tokenizer is used. Throws kEmptyDocument or kInvariantViolation.
DiscourseDocument build_document(std::string doc_id, std::string source_text,
                                 std::vector<SegmentSpec> segments,
                                 std::optional<AuthorLabel> author_label = std::nullopt,
                                 std::optional<std::vector<CharRange>> token_offsets = std::nullopt,
                                 const SegmentPolicy& policy = {});

// Re-checks every structural invariant of an already built document.
void validate_document(const DiscourseDocument& doc, const SegmentPolicy& policy = {});

// Checks one tree against a segment with `edu_count` EDUs.
void validate_tree(const DiscourseNode& tree, std::size_t edu_count);

// Per-EDU token lists. Indexed by document-wide EDU index.
struct EduTokenMap {
  std::vector<std::vector<std::size_t>> tokens_of_edu;

  std::size_t edu_count() const noexcept { return tokens_of_edu.size(); }
  friend bool operator==(const EduTokenMap&, const EduTokenMap&) = default;
};

// Token t goes to EDU e when at least half of t's characters fall inside e.
// Each token lands in at most one EDU; tokens with no majority stay unassigned.
EduTokenMap align_tokens(const TokenSequence& tokens, std::span<const Edu> edus);

EduTokenMap align_document(const DiscourseDocument& doc);

}  // namespace discoreward
