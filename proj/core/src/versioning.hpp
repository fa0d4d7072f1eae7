#pragma once

// Version handling shared by the persisted file formats. Private.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace discoreward::detail {

inline constexpr const char* kFileFormatVersion = "1.0";
inline constexpr int kFileFormatMajor = 1;

// Parses `text`, checks the "format" tag and the major version.
// Throws kCorruptFile or kVersionMismatch.
nlohmann::json parse_versioned(std::string_view text, std::string_view format);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace discoreward::detail
