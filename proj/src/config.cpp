#include "rlcthermo/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>

#include <fmt/format.h>

#include "rlcthermo/error.hpp"
#include "default_config.inc"

namespace rlc {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Config, line ? fmt::format("config line {}: {}", line, what) : what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

bool parse_number(std::string_view text, double& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_string(std::string_view text, std::string& out) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"') return false;
  text = text.substr(1, text.size() - 2);
  if (text.find('"') != std::string_view::npos) return false;
  out.assign(text);
  return true;
}

std::vector<std::string_view> split_items(std::string_view body, std::size_t line) {
  std::vector<std::string_view> items;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i < body.size() && body[i] == '"') quoted = !quoted;
    if (i == body.size() || (body[i] == ',' && !quoted)) {
      auto item = trim(body.substr(start, i - start));
      if (!item.empty()) {
        items.push_back(item);
      } else if (i != body.size()) {
        fail(line, "empty array element");
      }
      start = i + 1;
    }
  }
  if (quoted) fail(line, "unterminated string in array");
  return items;
}

ConfigValue parse_value(std::string_view text, std::size_t line) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  std::string str;
  if (parse_string(text, str)) return str;
  double number = 0.0;
  if (parse_number(text, number)) return number;
  if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
    const auto items = split_items(text.substr(1, text.size() - 2), line);
    if (items.empty()) return std::vector<double>{};
    if (items.front().front() == '"') {
      std::vector<std::string> out;
      for (auto item : items) {
        if (!parse_string(item, str)) fail(line, fmt::format("bad string element '{}'", item));
        out.push_back(str);
      }
      return out;
    }
    std::vector<double> out;
    for (auto item : items) {
      if (!parse_number(item, number)) fail(line, fmt::format("bad number element '{}'", item));
      out.push_back(number);
    }
    return out;
  }
  fail(line, fmt::format("cannot parse value '{}'", text));
}

std::string_view type_name(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return "number";
    case 1: return "boolean";
    case 2: return "string";
    case 3: return "number array";
    default: return "string array";
  }
}

bool compatible(const ConfigValue& a, const ConfigValue& b) {
  if (a.index() == b.index()) return true;
  // An empty array parses as numeric; let it stand in for either kind.
  const auto* na = std::get_if<std::vector<double>>(&a);
  const auto* nb = std::get_if<std::vector<double>>(&b);
  return (na && na->empty() && b.index() == 4) || (nb && nb->empty() && a.index() == 4);
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string render(const ConfigValue& v) {
  struct Visitor {
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return fmt::format("\"{}\"", s); }
    std::string operator()(const std::vector<double>& xs) const {
      std::string out = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + format_number(xs[i]);
      return out + "]";
    }
    std::string operator()(const std::vector<std::string>& xs) const {
      std::string out = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) out += fmt::format("{}\"{}\"", i ? ", " : "", xs[i]);
      return out + "]";
    }
  };
  return std::visit(Visitor{}, v);
}

template <class T>
const T& get(const std::map<std::string, ConfigValue>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) fail(0, fmt::format("missing config key '{}'", key));
  const T* v = std::get_if<T>(&it->second);
  if (!v) {
    fail(0, fmt::format("config key '{}' has type {}", key, type_name(it->second)));
  }
  return *v;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    auto line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated table header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) fail(line_no, fmt::format("bad table name '{}'", name));
      table.assign(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (!valid_key(key)) fail(line_no, fmt::format("bad key '{}'", key));
    const std::string full = table.empty() ? std::string(key) : table + "." + std::string(key);
    if (cfg.values_.count(full)) fail(line_no, fmt::format("duplicate key '{}'", full));
    cfg.values_.emplace(full, parse_value(line.substr(eq + 1), line_no));
  }
  return cfg;
}

void Config::merge(const Config& other, bool strict) {
  for (const auto& [key, value] : other.values_) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (strict) fail(0, fmt::format("unknown config key '{}'", key));
      values_.emplace(key, value);
      continue;
    }
    if (strict && !compatible(it->second, value)) {
      fail(0, fmt::format("config key '{}' expects a {} (got {})", key, type_name(it->second),
                          type_name(value)));
    }
    it->second = value;
  }
}

void Config::set(const std::string& key, std::string_view value_text) {
  Config single;
  single.values_.emplace(key, parse_value(value_text, 0));
  merge(single, true);
}

double Config::number(const std::string& key) const { return get<double>(values_, key); }
bool Config::boolean(const std::string& key) const { return get<bool>(values_, key); }
const std::string& Config::string(const std::string& key) const {
  return get<std::string>(values_, key);
}

std::vector<double> Config::numbers(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) {
    if (const auto* d = std::get_if<double>(&it->second)) return {*d};
  }
  return get<std::vector<double>>(values_, key);
}

std::vector<std::string> Config::strings(const std::string& key) const {
  const auto it = values_.find(key);
  if (it != values_.end()) {
    if (const auto* s = std::get_if<std::string>(&it->second)) return {*s};
    if (const auto* d = std::get_if<std::vector<double>>(&it->second); d && d->empty()) return {};
  }
  return get<std::vector<std::string>>(values_, key);
}

std::string Config::canonical() const {
  std::string out;
  for (const auto& [key, value] : values_) out += fmt::format("{} = {}\n", key, render(value));
  return out;
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string_view default_config_text() { return kDefaultConfigText; }

}  // namespace rlc
