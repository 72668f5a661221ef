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

#include "credstack/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "credstack/error.hpp"
#include "credstack/table.hpp"

namespace credstack {

std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string trimmed = trim_copy(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim_copy(std::string_view(trimmed).substr(0, eq));
    std::string value = trim_copy(std::string_view(trimmed).substr(eq + 1));
    if (key.empty()) throw UsageError("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.values_.count(key)) throw UsageError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    cfg.values_.emplace(std::move(key), std::move(value));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  try {
    return parse(read_file(path));
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  const auto it = values_.find(std::string(key));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string_view fallback) const {
  return get(key).value_or(std::string(fallback));
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  const auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

std::size_t KeyValueConfig::get_size(std::string_view key, std::size_t fallback) const {
  const auto v = get(key);
  return v ? parse_size(*v, key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(std::string_view key, std::uint64_t fallback) const {
  const auto v = get(key);
  return v ? parse_u64(*v, key) : fallback;
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  const auto v = get(key);
  return v ? parse_bool(*v, key) : fallback;
}

std::vector<std::string> KeyValueConfig::get_list(std::string_view key, const std::vector<std::string>& fallback) const {
  const auto v = get(key);
  return v ? split_list(*v) : fallback;
}

std::vector<std::size_t> KeyValueConfig::indices(std::string_view prefix) const {
  std::set<std::size_t> found;
  const std::string p = std::string(prefix) + ".";
  for (const auto& [key, _] : values_) {
    if (!key.starts_with(p)) continue;
    const auto rest = std::string_view(key).substr(p.size());
    const auto dot = rest.find('.');
    found.insert(parse_size(rest.substr(0, dot), key));
  }
  return {found.begin(), found.end()};
}

std::map<std::string, std::string> KeyValueConfig::section(std::string_view prefix) const {
  std::map<std::string, std::string> out;
  const std::string p = std::string(prefix) + ".";
  for (const auto& [key, value] : values_)
    if (key.starts_with(p)) out.emplace(key.substr(p.size()), value);
  return out;
}

std::string KeyValueConfig::to_string() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
  return out.str();
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string t = trim_copy(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || std::isnan(v))
    throw UsageError(std::string(what) + ": expected a number, got '" + t + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  const std::string t = trim_copy(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw UsageError(std::string(what) + ": expected a non-negative integer, got '" + t + "'");
  return v;
}

std::size_t parse_size(std::string_view text, std::string_view what) {
  return static_cast<std::size_t>(parse_u64(text, what));
}

bool parse_bool(std::string_view text, std::string_view what) {
  const std::string t = trim_copy(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw UsageError(std::string(what) + ": expected true or false, got '" + t + "'");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (trim_copy(text).empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(trim_copy(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace credstack
