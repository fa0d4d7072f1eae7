#include "versioning.hpp"

#include <fstream>
#include <sstream>

#include "discoreward/error.hpp"

namespace discoreward::detail {

nlohmann::json parse_versioned(std::string_view text, std::string_view format) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kCorruptFile, std::string("unreadable file: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::kCorruptFile, "file is not a JSON object");
  const auto tag = root.find("format");
  if (tag == root.end() || !tag->is_string() || tag->get<std::string>() != format) {
    throw Error(ErrorCode::kCorruptFile, "expected a '" + std::string(format) + "' file");
  }
  const auto version = root.find("version");
  if (version == root.end() || !version->is_string()) {
    throw Error(ErrorCode::kCorruptFile, "missing version");
  }
  const std::string v = version->get<std::string>();
  int major = 0;
  int minor = 0;
  char dot = 0;
  std::istringstream parse(v);
  if (!(parse >> major >> dot >> minor) || dot != '.' || !parse.eof()) {
    throw Error(ErrorCode::kCorruptFile, "malformed version '" + v + "'");
  }
  if (major != kFileFormatMajor) {
    throw Error(ErrorCode::kVersionMismatch,
                "file version " + v + " is not readable by format " + kFileFormatVersion);
  }
  return root;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace discoreward::detail
