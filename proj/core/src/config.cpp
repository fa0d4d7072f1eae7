#include "discoreward/config.hpp"

#include <algorithm>
#include <charconv>

#include "discoreward/error.hpp"
#include "versioning.hpp"

namespace discoreward {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string_view key) {
  std::string out(key);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
      throw Error(ErrorCode::kMalformedInput,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    config.set(std::string(trim(line.substr(0, eq))), std::string(value));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  return parse(detail::read_file(path));
}

void KeyValueConfig::set(std::string key, std::string value) {
  values_[normalize_key(key)] = std::move(value);
}

bool KeyValueConfig::contains(std::string_view key) const {
  return values_.find(normalize_key(key)) != values_.end();
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = values_.find(normalize_key(key));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  try {
    std::size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used == v->size()) return d;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument, "config '" + std::string(key) + "' is not a number");
}

std::optional<long long> KeyValueConfig::get_int(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
  if (ec != std::errc{} || ptr != v->data() + v->size()) {
    throw Error(ErrorCode::kInvalidArgument, "config '" + std::string(key) + "' is not an integer");
  }
  return out;
}

std::optional<bool> KeyValueConfig::get_bool(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw Error(ErrorCode::kInvalidArgument, "config '" + std::string(key) + "' is not a boolean");
}

}  // namespace discoreward
