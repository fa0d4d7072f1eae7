#include "discoreward/document_io.hpp"

#include <fstream>
#include <string>

#include "json_codec.hpp"

namespace discoreward {
namespace detail {
namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::kMalformedInput, message);
}

std::size_t offset_from_json(const Json& v, const char* what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    malformed(std::string(what) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Nuclearity nuclearity_from_json(const Json& v) {
  if (!v.is_string()) malformed("nuclearity must be a string");
  const auto s = v.get<std::string>();
  if (s == "N" || s == "Nucleus" || s == "nucleus") return Nuclearity::kNucleus;
  if (s == "S" || s == "Satellite" || s == "satellite") return Nuclearity::kSatellite;
  malformed("unknown nuclearity '" + s + "'");
}

DiscourseNode node_from_json(const Json& v, std::size_t depth) {
  if (depth > 10000) malformed("tree nesting is too deep");
  if (!v.is_object()) malformed("tree node must be an object");
  if (const auto edu = v.find("edu"); edu != v.end()) {
    return DiscourseNode::leaf(offset_from_json(*edu, "edu"));
  }
  const auto relation = v.find("relation");
  const auto children = v.find("children");
  if (relation == v.end() || !relation->is_string()) {
    malformed("internal node needs a string 'relation'");
  }
  if (children == v.end() || !children->is_array()) {
    malformed("internal node needs a 'children' array");
  }
  std::vector<DiscourseChild> kids;
  kids.reserve(children->size());
  for (const auto& child : *children) {
    if (!child.is_object() || !child.contains("nuclearity") || !child.contains("node")) {
      malformed("child entries need 'nuclearity' and 'node'");
    }
    kids.push_back({nuclearity_from_json(child.at("nuclearity")),
                    node_from_json(child.at("node"), depth + 1)});
  }
  return DiscourseNode::relation(relation->get<std::string>(), std::move(kids));
}

OrderedJson node_to_json(const DiscourseNode& node) {
  OrderedJson out = OrderedJson::object();
  if (node.is_leaf()) {
    out["edu"] = node.edu();
    return out;
  }
  out["relation"] = node.label();
  OrderedJson children = OrderedJson::array();
  for (const auto& c : node.children()) {
    OrderedJson child = OrderedJson::object();
    child["nuclearity"] = std::string(to_string(c.nuclearity));
    child["node"] = node_to_json(c.node);
    children.push_back(std::move(child));
  }
  out["children"] = std::move(children);
  return out;
}

OrderedJson range_to_json(const CharRange& r) { return OrderedJson::array({r.begin, r.end}); }

}  // namespace

CharRange range_from_json(const Json& value, const char* what) {
  if (!value.is_array() || value.size() != 2) {
    malformed(std::string(what) + " must be a [begin, end) pair");
  }
  const CharRange r{offset_from_json(value[0], what), offset_from_json(value[1], what)};
  if (r.end < r.begin) malformed(std::string(what) + " has end before begin");
  return r;
}

std::vector<CharRange> offsets_from_json(const Json& value) {
  if (!value.is_array()) malformed("'tokens' must be an array of [begin, end) pairs");
  std::vector<CharRange> out;
  out.reserve(value.size());
  for (const auto& pair : value) out.push_back(range_from_json(pair, "token offset"));
  return out;
}

DiscourseDocument document_from_json(const Json& record, const SegmentPolicy& policy) {
  if (!record.is_object()) malformed("document record must be a JSON object");
  const auto id = record.find("doc_id");
  const auto text = record.find("text");
  const auto segments = record.find("segments");
  if (id == record.end() || !id->is_string()) malformed("missing string field 'doc_id'");
  if (text == record.end() || !text->is_string()) malformed("missing string field 'text'");
  if (segments == record.end() || !segments->is_array()) {
    malformed("missing array field 'segments'");
  }

  std::optional<AuthorLabel> label;
  if (const auto l = record.find("author_label"); l != record.end() && !l->is_null()) {
    if (!l->is_string()) malformed("'author_label' must be a string");
    const auto s = l->get<std::string>();
    if (s == "human") label = AuthorLabel::kHuman;
    else if (s == "machine") label = AuthorLabel::kMachine;
    else if (s == "unknown") label = AuthorLabel::kUnknown;
    else malformed("unknown author_label '" + s + "'");
  }

  std::optional<std::vector<CharRange>> offsets;
  if (const auto t = record.find("tokens"); t != record.end() && !t->is_null()) {
    offsets = offsets_from_json(*t);
  }

  std::vector<SegmentSpec> specs;
  specs.reserve(segments->size());
  for (const auto& seg : *segments) {
    if (!seg.is_object()) malformed("segment must be an object");
    if (!seg.contains("char_range") || !seg.contains("edus") || !seg.contains("tree")) {
      malformed("segment needs 'char_range', 'edus' and 'tree'");
    }
    SegmentSpec spec;
    spec.chars = range_from_json(seg.at("char_range"), "char_range");
    const auto& edus = seg.at("edus");
    if (!edus.is_array()) malformed("'edus' must be an array");
    for (const auto& edu : edus) {
      if (!edu.is_object() || !edu.contains("span")) malformed("EDU entries need a 'span'");
      spec.edu_spans.push_back(range_from_json(edu.at("span"), "span"));
    }
    spec.tree = node_from_json(seg.at("tree"), 0);
    specs.push_back(std::move(spec));
  }

  return build_document(id->get<std::string>(), text->get<std::string>(), std::move(specs), label,
                        std::move(offsets), policy);
}

OrderedJson document_to_json(const DiscourseDocument& doc) {
  OrderedJson out = OrderedJson::object();
  out["doc_id"] = doc.doc_id;
  out["text"] = doc.source_text;
  if (doc.author_label) out["author_label"] = std::string(to_string(*doc.author_label));
  if (doc.tokens_supplied) {
    OrderedJson tokens = OrderedJson::array();
    for (const auto& t : doc.tokens) tokens.push_back(range_to_json(t.span));
    out["tokens"] = std::move(tokens);
  }
  OrderedJson segments = OrderedJson::array();
  for (const auto& s : doc.segments) {
    OrderedJson seg = OrderedJson::object();
    seg["char_range"] = range_to_json(s.chars);
    OrderedJson edus = OrderedJson::array();
    for (const auto& e : s.edus) edus.push_back(OrderedJson{{"span", range_to_json(e.span)}});
    seg["edus"] = std::move(edus);
    seg["tree"] = node_to_json(s.tree);
    segments.push_back(std::move(seg));
  }
  out["segments"] = std::move(segments);
  return out;
}

}  // namespace detail

DiscourseDocument parse_document(std::string_view serialized, DocumentFormat format,
                                 const SegmentPolicy& policy) {
  switch (format) {
    case DocumentFormat::kJsonLine: {
      detail::Json record;
      try {
        record = detail::Json::parse(serialized);
      } catch (const detail::Json::parse_error& e) {
        throw Error(ErrorCode::kMalformedInput, std::string("invalid JSON: ") + e.what());
      }
      try {
        return detail::document_from_json(record, policy);
      } catch (const detail::Json::exception& e) {
        throw Error(ErrorCode::kMalformedInput, e.what());
      }
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unsupported document format");
}

std::string serialize_document(const DiscourseDocument& doc) {
  return detail::document_to_json(doc).dump();
}

std::vector<CorpusLine> read_corpus_lines(std::istream& in, const SegmentPolicy& policy) {
  std::vector<CorpusLine> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    CorpusLine entry;
    entry.line_number = number;
    try {
      entry.document = parse_document(line, DocumentFormat::kJsonLine, policy);
    } catch (const Error& e) {
      entry.error_code = e.code();
      entry.error_message = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<DiscourseDocument> load_corpus(const std::filesystem::path& path,
                                           const SegmentPolicy& policy) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<DiscourseDocument> docs;
  for (auto& entry : read_corpus_lines(in, policy)) {
    if (!entry.document) {
      throw Error(*entry.error_code, path.string() + ":" + std::to_string(entry.line_number) +
                                         ": " + entry.error_message);
    }
    docs.push_back(std::move(*entry.document));
  }
  return docs;
}

}  // namespace discoreward
