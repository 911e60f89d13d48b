#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "../errors.hpp"

// Flat `dotted.key = value` text. '#' starts a comment, blank lines are
// ignored, every key may appear once.

namespace ethnokinetics::io {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  static Config parse(std::string_view text) {
    Config cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
      ++line_no;
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) throw ParseError(line_no, "missing key before '='");
      for (char c : key)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_'))
          throw ParseError(line_no, "invalid character in key '" + key + "'");
      if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
      if (cfg.entries_.count(key)) {
        throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                      std::to_string(cfg.entries_[key].line) + ")");
      }
      cfg.entries_[key] = {value, line_no};
      cfg.order_.push_back(key);
    }
    return cfg;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::size_t line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::optional<std::string> text(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.insert(key);
    return it->second.value;
  }

  std::optional<double> number(const std::string& key) const {
    auto t = text(key);
    if (!t) return std::nullopt;
    auto v = parse_double(*t);
    if (!v) throw ParseError(line_of(key), "'" + key + "' is not a number: " + *t);
    return v;
  }

  std::optional<std::uint64_t> integer(const std::string& key) const {
    auto t = text(key);
    if (!t) return std::nullopt;
    auto v = parse_u64(*t);
    if (!v) throw ParseError(line_of(key), "'" + key + "' is not a non-negative integer: " + *t);
    return v;
  }

  std::optional<bool> boolean(const std::string& key) const {
    auto t = text(key);
    if (!t) return std::nullopt;
    if (*t == "true" || *t == "yes" || *t == "on" || *t == "1") return true;
    if (*t == "false" || *t == "no" || *t == "off" || *t == "0") return false;
    throw ParseError(line_of(key), "'" + key + "' is not a boolean: " + *t);
  }

  /// Comma-separated numbers.
  std::optional<std::vector<double>> numbers(const std::string& key) const {
    auto t = text(key);
    if (!t) return std::nullopt;
    std::vector<double> out;
    std::string_view rest = *t;
    for (;;) {
      const auto comma = rest.find(',');
      auto v = parse_double(rest.substr(0, comma));
      if (!v) throw ParseError(line_of(key), "'" + key + "' must be a comma-separated list of numbers");
      out.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  /// Keys never read by any accessor, in file order.
  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& k : order_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
  mutable std::set<std::string> used_;
};

}  // namespace ethnokinetics::io
