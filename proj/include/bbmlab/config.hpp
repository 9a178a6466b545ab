#pragma once

#include <bbmlab/errors.hpp>
#include <bbmlab/spectrum_io.hpp>

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bbm {

/// Keyed text: one `key = value` per line, `#` starts a comment, lists are
/// comma separated. Every lookup error names the line it came from.
class KeyedConfig {
 public:
  struct Value {
    std::string text;
    std::size_t line = 0;
  };

  static KeyedConfig parse(std::istream& in) {
    KeyedConfig cfg;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      std::string_view s = raw;
      if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
      s = detail::trim(s);
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
      const auto key = std::string(detail::trim(s.substr(0, eq)));
      if (key.empty()) throw ParseError(line, "empty key");
      if (cfg.values_.contains(key)) throw ParseError(line, "duplicate key '" + key + "'");
      cfg.values_[key] = {std::string(detail::trim(s.substr(eq + 1))), line};
    }
    return cfg;
  }

  static KeyedConfig parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  void set(const std::string& key, std::string value) { values_[key] = {std::move(value), 0}; }

  std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second.text;
    if (fallback) return *fallback;
    throw ParseError(0, "missing required key '" + key + "'");
  }

  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ParseError(0, "missing required key '" + key + "'");
    }
    return number(it->second, key);
  }

  std::optional<double> get_optional_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end() || it->second.text.empty()) return std::nullopt;
    return number(it->second, key);
  }

  long long get_int(const std::string& key, std::optional<long long> fallback = std::nullopt) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ParseError(0, "missing required key '" + key + "'");
    }
    const double v = number(it->second, key);
    if (v != static_cast<double>(static_cast<long long>(v)))
      throw ParseError(it->second.line, "key '" + key + "' must be an integer");
    return static_cast<long long>(v);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto& t = it->second.text;
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ParseError(it->second.line, "key '" + key + "' must be true or false");
  }

  std::vector<double> get_list(const std::string& key, std::optional<std::vector<double>> fallback = std::nullopt) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw ParseError(0, "missing required key '" + key + "'");
    }
    std::vector<double> out;
    if (detail::trim(it->second.text).empty()) return out;
    for (auto part : detail::split(it->second.text, ',')) {
      const auto v = detail::parse_double(detail::trim(part));
      if (!v) throw ParseError(it->second.line, "malformed number in list '" + key + "'");
      out.push_back(*v);
    }
    return out;
  }

  /// Rejects keys outside `known` so typos do not pass silently.
  void require_known(const std::set<std::string>& known) const {
    for (const auto& [key, value] : values_)
      if (!known.contains(key)) throw ParseError(value.line, "unknown key '" + key + "'");
  }

  const std::map<std::string, Value>& values() const noexcept { return values_; }

 private:
  static double number(const Value& v, const std::string& key) {
    const auto d = detail::parse_double(detail::trim(v.text));
    if (!d) throw ParseError(v.line, "key '" + key + "' expects a number, got '" + v.text + "'");
    return *d;
  }

  std::map<std::string, Value> values_;
};

}  // namespace bbm
