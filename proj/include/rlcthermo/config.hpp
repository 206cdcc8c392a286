#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rlc {

/// A parsed configuration value. Arrays hold numbers or strings, never both.
using ConfigValue =
    std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>>;

/// Flat view of a TOML-style file: "[table]" headers followed by
/// "key = value" lines, stored under "table.key". Supported values are
/// numbers, booleans, double-quoted strings and single-line arrays of numbers
/// or strings. '#' starts a comment outside strings.
class Config {
 public:
  static Config parse(std::string_view text);

  /// Overlays other on top of this config. With strict set, every key of
  /// other must already exist here (catches misspelled keys).
  void merge(const Config& other, bool strict);

  /// Sets a key from its textual form, e.g. set("check.tolerance", "0").
  /// The value is parsed with the same rules as the file format.
  void set(const std::string& key, std::string_view value_text);

  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  double number(const std::string& key) const;
  bool boolean(const std::string& key) const;
  const std::string& string(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;

  /// Canonical "key = value" listing in key order; stable across runs.
  std::string canonical() const;
  /// FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;

  const std::map<std::string, ConfigValue>& values() const { return values_; }

 private:
  std::map<std::string, ConfigValue> values_;
};

/// The shipped default configuration text.
std::string_view default_config_text();

}  // namespace rlc
