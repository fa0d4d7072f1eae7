#include "discoreward/discourse_tree.hpp"

#include <algorithm>
#include <string>

#include "discoreward/error.hpp"

namespace discoreward {
namespace {

void check_tree(const DiscourseNode& node, std::vector<int>& seen, std::size_t depth) {
  if (depth > 10000) {
    throw Error(ErrorCode::kInvariantViolation, "discourse tree is too deep");
  }
  if (node.is_leaf()) {
    if (node.edu() >= seen.size()) {
      throw Error(ErrorCode::kInvariantViolation,
                  "leaf references EDU " + std::to_string(node.edu()) + " but the segment has " +
                      std::to_string(seen.size()) + " EDUs");
    }
    if (seen[node.edu()]++ > 0) {
      throw Error(ErrorCode::kInvariantViolation,
                  "EDU " + std::to_string(node.edu()) + " appears in more than one leaf");
    }
    return;
  }
  if (node.children().size() < 2) {
    throw Error(ErrorCode::kInvariantViolation,
                "relation '" + node.label() + "' has fewer than two children");
  }
  if (node.label().empty()) {
    throw Error(ErrorCode::kInvariantViolation, "relation label is empty");
  }
  const bool has_nucleus = std::any_of(
      node.children().begin(), node.children().end(),
      [](const DiscourseChild& c) { return c.nuclearity == Nuclearity::kNucleus; });
  if (!has_nucleus) {
    throw Error(ErrorCode::kInvariantViolation,
                "relation '" + node.label() + "' has only satellite children");
  }
  for (const auto& child : node.children()) check_tree(child.node, seen, depth + 1);
}

void check_segment_sizes(const std::vector<Segment>& segments, const SegmentPolicy& policy) {
  if (!policy.enforce || segments.size() < 2) return;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::size_t n = segments[i].tokens.size();
    const bool last = i + 1 == segments.size();
    if (n > policy.budget || (!last && n < policy.floor)) {
      throw Error(ErrorCode::kInvariantViolation,
                  "segment " + std::to_string(i) + " has " + std::to_string(n) +
                      " tokens, outside [" + std::to_string(policy.floor) + ", " +
                      std::to_string(policy.budget) + "]");
    }
  }
}

}  // namespace

std::string_view to_string(Nuclearity n) noexcept {
  return n == Nuclearity::kNucleus ? "N" : "S";
}

std::string_view to_string(AuthorLabel label) noexcept {
  switch (label) {
    case AuthorLabel::kHuman: return "human";
    case AuthorLabel::kMachine: return "machine";
    case AuthorLabel::kUnknown: return "unknown";
  }
  return "unknown";
}

DiscourseNode DiscourseNode::leaf(std::size_t edu) {
  DiscourseNode node;
  node.edu_ = edu;
  return node;
}

DiscourseNode DiscourseNode::relation(std::string label, std::vector<DiscourseChild> children) {
  DiscourseNode node;
  node.label_ = std::move(label);
  node.children_ = std::move(children);
  return node;
}

std::size_t DiscourseNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c.node.node_count();
  return n;
}

std::size_t DiscourseNode::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children_) n += c.node.leaf_count();
  return n;
}

bool operator==(const DiscourseNode& a, const DiscourseNode& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.edu_ == b.edu_;
  return a.label_ == b.label_ && a.children_ == b.children_;
}

std::size_t DiscourseDocument::edu_count() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.edus.size();
  return n;
}

std::vector<Edu> DiscourseDocument::all_edus() const {
  std::vector<Edu> out;
  out.reserve(edu_count());
  for (const auto& s : segments) out.insert(out.end(), s.edus.begin(), s.edus.end());
  return out;
}

std::size_t DiscourseDocument::edu_offset(std::size_t segment) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < segment && i < segments.size(); ++i) n += segments[i].edus.size();
  return n;
}

void validate_tree(const DiscourseNode& tree, std::size_t edu_count) {
  std::vector<int> seen(edu_count, 0);
  check_tree(tree, seen, 0);
  const auto missing = std::find(seen.begin(), seen.end(), 0);
  if (missing != seen.end()) {
    throw Error(ErrorCode::kInvariantViolation,
                "EDU " + std::to_string(missing - seen.begin()) + " is not covered by the tree");
  }
}

DiscourseDocument build_document(std::string doc_id, std::string source_text,
                                 std::vector<SegmentSpec> segments,
                                 std::optional<AuthorLabel> author_label,
                                 std::optional<std::vector<CharRange>> token_offsets,
                                 const SegmentPolicy& policy) {
  if (source_text.empty()) throw Error(ErrorCode::kEmptyDocument, "document text is empty");
  if (segments.empty()) throw Error(ErrorCode::kEmptyDocument, "document has no segments");

  DiscourseDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.source_text = std::move(source_text);
  doc.author_label = author_label;
  if (token_offsets) {
    doc.tokens = TokenSequence::from_offsets(doc.source_text, *token_offsets);
    doc.tokens_supplied = true;
  } else {
    doc.tokens = tokenize(doc.source_text);
  }

  std::size_t next_edu = 0;
  doc.segments.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto& spec = segments[i];
    const std::string where = "segment " + std::to_string(i);
    if (spec.chars.empty() || spec.chars.end > doc.source_text.size()) {
      throw Error(ErrorCode::kInvariantViolation, where + " has an empty or out-of-bounds range");
    }
    if (i > 0 && spec.chars.begin != segments[i - 1].chars.end) {
      throw Error(ErrorCode::kInvariantViolation,
                  where + " does not start where the previous segment ends");
    }
    if (spec.edu_spans.empty()) {
      throw Error(ErrorCode::kInvariantViolation, where + " has no EDUs");
    }

    Segment seg;
    seg.chars = spec.chars;
    seg.tokens = doc.tokens.tokens_starting_in(spec.chars);
    seg.edus.reserve(spec.edu_spans.size());
    for (std::size_t e = 0; e < spec.edu_spans.size(); ++e) {
      const CharRange& span = spec.edu_spans[e];
      if (span.empty() || !spec.chars.contains(span)) {
        throw Error(ErrorCode::kInvariantViolation,
                    where + " EDU " + std::to_string(e) + " is empty or outside the segment");
      }
      if (e > 0 && span.begin < spec.edu_spans[e - 1].end) {
        throw Error(ErrorCode::kInvariantViolation,
                    where + " EDU " + std::to_string(e) + " overlaps the previous EDU");
      }
      seg.edus.push_back({next_edu++, doc.source_text.substr(span.begin, span.size()), span});
    }
    validate_tree(spec.tree, seg.edus.size());
    seg.tree = std::move(spec.tree);
    doc.segments.push_back(std::move(seg));
  }
  check_segment_sizes(doc.segments, policy);
  return doc;
}

void validate_document(const DiscourseDocument& doc, const SegmentPolicy& policy) {
  std::vector<SegmentSpec> specs;
  for (const auto& s : doc.segments) {
    SegmentSpec spec{s.chars, {}, s.tree};
    for (const auto& e : s.edus) spec.edu_spans.push_back(e.span);
    specs.push_back(std::move(spec));
  }
  std::optional<std::vector<CharRange>> offsets;
  if (doc.tokens_supplied) offsets = doc.tokens.offsets();
  const DiscourseDocument rebuilt = build_document(doc.doc_id, doc.source_text, std::move(specs),
                                                   doc.author_label, offsets, policy);
  if (!(rebuilt == doc)) {
    throw Error(ErrorCode::kInvariantViolation,
                "document '" + doc.doc_id + "' has derived fields inconsistent with its text");
  }
}

EduTokenMap align_tokens(const TokenSequence& tokens, std::span<const Edu> edus) {
  EduTokenMap map;
  map.tokens_of_edu.resize(edus.size());
  std::size_t first = 0;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const CharRange& span = tokens[t].span;
    while (first < edus.size() && edus[first].span.end <= span.begin) ++first;
    for (std::size_t e = first; e < edus.size() && edus[e].span.begin < span.end; ++e) {
      if (2 * overlap(span, edus[e].span) >= span.size()) {
        map.tokens_of_edu[e].push_back(t);
        break;
      }
    }
  }
  return map;
}

EduTokenMap align_document(const DiscourseDocument& doc) {
  const auto edus = doc.all_edus();
  return align_tokens(doc.tokens, edus);
}

}  // namespace discoreward
