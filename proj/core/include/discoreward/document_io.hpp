#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discoreward/discourse_tree.hpp"
#include "discoreward/error.hpp"

namespace discoreward {

enum class DocumentFormat {
  // One JSON object per line; see docs/document_format.md.
  kJsonLine,
};

// Parses and validates one serialized document record.
// Throws kMalformedInput, kInvariantViolation or kEmptyDocument.
DiscourseDocument parse_document(std::string_view serialized,
                                 DocumentFormat format = DocumentFormat::kJsonLine,
                                 const SegmentPolicy& policy = {});

// Compact single-line record with keys in schema order. Tokens are written
// only when they were supplied by the caller.
std::string serialize_document(const DiscourseDocument& doc);

struct CorpusLine {
  std::size_t line_number = 0;  // 1-based
  std::optional<DiscourseDocument> document;
  std::optional<ErrorCode> error_code;
  std::string error_message;
};

// Reads a line-delimited corpus, keeping per-line errors. Blank lines are skipped.
std::vector<CorpusLine> read_corpus_lines(std::istream& in, const SegmentPolicy& policy = {});

// Reads a corpus and throws on the first invalid record (the message names the line).
std::vector<DiscourseDocument> load_corpus(const std::filesystem::path& path,
                                           const SegmentPolicy& policy = {});

}  // namespace discoreward
