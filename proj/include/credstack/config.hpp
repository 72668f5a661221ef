// Copyright 2026 The credstack Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace credstack {

// Flat `key = value` configuration with dotted keys (base.0.kind = gbdt).
// '#' starts a comment line; blank lines are ignored; duplicate keys are an
// error. Values are kept as text and converted on access.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  bool has(std::string_view key) const { return values_.count(std::string(key)) > 0; }
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::size_t get_size(std::string_view key, std::size_t fallback) const;
  std::uint64_t get_u64(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  std::vector<std::string> get_list(std::string_view key, const std::vector<std::string>& fallback = {}) const;

  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  const std::map<std::string, std::string>& entries() const { return values_; }

  // Distinct N for keys of the form prefix.N.rest, ascending.
  std::vector<std::size_t> indices(std::string_view prefix) const;
  // Every key under prefix. stripped of it: {"kind" -> "gbdt", ...}.
  std::map<std::string, std::string> section(std::string_view prefix) const;

  std::string to_string() const;

 private:
  std::map<std::string, std::string> values_;
};

double parse_double(std::string_view text, std::string_view what);
std::size_t parse_size(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);
// Comma-separated list with surrounding whitespace trimmed; "" gives {}.
std::vector<std::string> split_list(std::string_view text);
std::string trim_copy(std::string_view s);

}  // namespace credstack
