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


// Run configuration files.
//
// The format is a small TOML subset: `[section]` headers, `key = value`
// lines and `#` comments. Values are numbers, "strings", true/false, or
// one-line [lists] of numbers or strings. Units are part of the key names.
// Every key must be consumed by the command reading the file, so typos are
// reported instead of silently ignored.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hybridcq/errors.hpp"

namespace hybridcq::cli {

/// Malformed or inconsistent configuration; the message names line and field.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  double number(const std::string& section, const std::string& key);
  double number(const std::string& section, const std::string& key, double fallback);
  std::int64_t integer(const std::string& section, const std::string& key);
  std::int64_t integer(const std::string& section, const std::string& key, std::int64_t fallback);
  std::uint64_t unsigned_integer(const std::string& section, const std::string& key, std::uint64_t fallback);
  std::string string(const std::string& section, const std::string& key);
  std::string string(const std::string& section, const std::string& key, const std::string& fallback);
  bool boolean(const std::string& section, const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& section, const std::string& key);
  std::vector<double> numbers(const std::string& section, const std::string& key, const std::vector<double>& fallback);
  std::vector<std::string> strings(const std::string& section, const std::string& key,
                                   const std::vector<std::string>& fallback);

  /// Records a value chosen by the program (an override or a derived default)
  /// so that it appears in the resolved dump.
  void set_resolved(const std::string& section, const std::string& key, const std::string& value);

  /// Drops a key from the resolved dump (it still counts as used).
  void omit_resolved(const std::string& section, const std::string& key);

  /// Throws ConfigError naming the first key no getter asked for.
  void check_all_used() const;

  /// Every value read so far, defaults included, as `[section] key = value` lines.
  std::vector<std::string> resolved_lines() const;

  /// Builds a diagnostic of the form "<source>:<line>: [section] key: message".
  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string raw;
    int line = 0;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  void mark(const std::string& section, const std::string& key, const std::string& value);

  std::string source_;
  std::map<std::pair<std::string, std::string>, Entry> entries_;
  std::set<std::pair<std::string, std::string>> used_;
  std::map<std::pair<std::string, std::string>, std::string> resolved_;
};

/// Shortest round-trip decimal for a double ("%.17g").
std::string format_double(double x);

}  // namespace hybridcq::cli
