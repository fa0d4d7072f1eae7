#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace discoreward {

// Declarative `key = value` settings. '#' starts a comment; blank lines are
// ignored; later assignments override earlier ones. Keys are
// case-sensitive and dashes are normalized to underscores.
class KeyValueConfig {
 public:
  // Throws kMalformedInput (naming the line) for lines without '='.
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  void set(std::string key, std::string value);
  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;

  // Typed getters throw kInvalidArgument when the value does not parse.
  std::optional<double> get_double(std::string_view key) const;
  std::optional<long long> get_int(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
    return values_;
  }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace discoreward
