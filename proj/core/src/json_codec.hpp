#pragma once

// Shared JSON conversions for the document record. Private to the library.

#include <nlohmann/json.hpp>

#include "discoreward/discourse_tree.hpp"

namespace discoreward::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

DiscourseDocument document_from_json(const Json& record, const SegmentPolicy& policy);
OrderedJson document_to_json(const DiscourseDocument& doc);

CharRange range_from_json(const Json& value, const char* what);
std::vector<CharRange> offsets_from_json(const Json& value);

}  // namespace discoreward::detail
