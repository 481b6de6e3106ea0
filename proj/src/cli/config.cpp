// Copyright 2026 The hybridcq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hybridcq/cli/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hybridcq::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::string> parse_string(const std::string& s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::nullopt;
  const std::string inner = s.substr(1, s.size() - 2);
  if (inner.find('"') != std::string::npos) return std::nullopt;
  return inner;
}

/// Splits the inside of a one-line list on commas outside strings.
std::optional<std::vector<std::string>> parse_list(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  const std::string inner = trim(s.substr(1, s.size() - 2));
  std::vector<std::string> items;
  if (inner.empty()) return items;
  std::string cur;
  bool quoted = false;
  for (char c : inner) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  items.push_back(trim(cur));
  for (const auto& item : items) {
    if (item.empty()) return std::nullopt;
  }
  return items;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (!valid_name(section)) throw ConfigError(where + "invalid section name '" + section + "'");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (section.empty()) throw ConfigError(where + "key '" + key + "' appears before any [section]");
    if (!valid_name(key)) throw ConfigError(where + "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(where + "[" + section + "] " + key + ": missing value");
    const auto id = std::make_pair(section, key);
    if (cfg.entries_.count(id) != 0) throw ConfigError(where + "[" + section + "] " + key + ": duplicate key");
    cfg.entries_[id] = Entry{value, lineno};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  const auto it = entries_.find({section, key});
  return it == entries_.end() ? nullptr : &it->second;
}

void Config::mark(const std::string& section, const std::string& key, const std::string& value) {
  used_.insert({section, key});
  resolved_[{section, key}] = value;
}

void Config::omit_resolved(const std::string& section, const std::string& key) { resolved_.erase({section, key}); }

void Config::set_resolved(const std::string& section, const std::string& key, const std::string& value) {
  resolved_[{section, key}] = value;
}

void Config::fail(const std::string& section, const std::string& key, const std::string& message) const {
  const Entry* e = find(section, key);
  const std::string where = e ? source_ + ":" + std::to_string(e->line) + ": " : source_ + ": ";
  throw ConfigError(where + "[" + section + "] " + key + ": " + message);
}

double Config::number(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "required field is missing");
  const auto v = parse_number(e->raw);
  if (!v) fail(section, key, "expected a finite number, got '" + e->raw + "'");
  mark(section, key, format_double(*v));
  return *v;
}

double Config::number(const std::string& section, const std::string& key, double fallback) {
  if (has(section, key)) return number(section, key);
  mark(section, key, format_double(fallback));
  return fallback;
}

std::int64_t Config::integer(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "required field is missing");
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(e->raw.c_str(), &end, 10);
  if (end != e->raw.c_str() + e->raw.size() || errno == ERANGE || e->raw.empty()) {
    fail(section, key, "expected an integer, got '" + e->raw + "'");
  }
  mark(section, key, std::to_string(v));
  return v;
}

std::int64_t Config::integer(const std::string& section, const std::string& key, std::int64_t fallback) {
  if (has(section, key)) return integer(section, key);
  mark(section, key, std::to_string(fallback));
  return fallback;
}

std::uint64_t Config::unsigned_integer(const std::string& section, const std::string& key, std::uint64_t fallback) {
  const Entry* e = find(section, key);
  if (!e) {
    mark(section, key, std::to_string(fallback));
    return fallback;
  }
  errno = 0;
  char* end = nullptr;
  if (e->raw.empty() || e->raw.front() == '-') fail(section, key, "expected a non-negative integer, got '" + e->raw + "'");
  const unsigned long long v = std::strtoull(e->raw.c_str(), &end, 10);
  if (end != e->raw.c_str() + e->raw.size() || errno == ERANGE) {
    fail(section, key, "expected a non-negative integer, got '" + e->raw + "'");
  }
  mark(section, key, std::to_string(v));
  return v;
}

std::string Config::string(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "required field is missing");
  const auto v = parse_string(e->raw);
  if (!v) fail(section, key, "expected a quoted string, got '" + e->raw + "'");
  mark(section, key, "\"" + *v + "\"");
  return *v;
}

std::string Config::string(const std::string& section, const std::string& key, const std::string& fallback) {
  if (has(section, key)) return string(section, key);
  mark(section, key, "\"" + fallback + "\"");
  return fallback;
}

bool Config::boolean(const std::string& section, const std::string& key, bool fallback) {
  const Entry* e = find(section, key);
  bool v = fallback;
  if (e) {
    if (e->raw == "true") {
      v = true;
    } else if (e->raw == "false") {
      v = false;
    } else {
      fail(section, key, "expected true or false, got '" + e->raw + "'");
    }
  }
  mark(section, key, v ? "true" : "false");
  return v;
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) fail(section, key, "required field is missing");
  const auto items = parse_list(e->raw);
  if (!items) fail(section, key, "expected a [list] of numbers, got '" + e->raw + "'");
  std::vector<double> out;
  std::string dump = "[";
  for (const auto& item : *items) {
    const auto v = parse_number(item);
    if (!v) fail(section, key, "list entry '" + item + "' is not a finite number");
    if (!out.empty()) dump += ", ";
    dump += format_double(*v);
    out.push_back(*v);
  }
  mark(section, key, dump + "]");
  return out;
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key,
                                    const std::vector<double>& fallback) {
  if (has(section, key)) return numbers(section, key);
  std::string dump = "[";
  for (std::size_t i = 0; i < fallback.size(); ++i) dump += (i ? ", " : "") + format_double(fallback[i]);
  mark(section, key, dump + "]");
  return fallback;
}

std::vector<std::string> Config::strings(const std::string& section, const std::string& key,
                                         const std::vector<std::string>& fallback) {
  const Entry* e = find(section, key);
  std::vector<std::string> out = fallback;
  if (e) {
    const auto items = parse_list(e->raw);
    if (!items) fail(section, key, "expected a [list] of strings, got '" + e->raw + "'");
    out.clear();
    for (const auto& item : *items) {
      const auto v = parse_string(item);
      if (!v) fail(section, key, "list entry " + item + " is not a quoted string");
      out.push_back(*v);
    }
  }
  std::string dump = "[";
  for (std::size_t i = 0; i < out.size(); ++i) dump += (i ? ", \"" : "\"") + out[i] + "\"";
  mark(section, key, dump + "]");
  return out;
}

void Config::check_all_used() const {
  for (const auto& [id, entry] : entries_) {
    if (used_.count(id) == 0) {
      throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": [" + id.first + "] " + id.second +
                        ": unknown field");
    }
  }
}

std::vector<std::string> Config::resolved_lines() const {
  std::vector<std::string> lines;
  std::string section;
  for (const auto& [id, value] : resolved_) {
    if (id.first != section) {
      section = id.first;
      lines.push_back("[" + section + "]");
    }
    lines.push_back(id.second + " = " + value);
  }
  return lines;
}

}  // namespace hybridcq::cli
