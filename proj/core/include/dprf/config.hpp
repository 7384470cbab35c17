// Copyright 2026 The DPRF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPRF_CONFIG_HPP_
#define DPRF_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dprf/common.hpp"

namespace dprf {

// Flat typed key-value experiment configuration.
//
// Grammar: one `key = value` pair per line; `#` starts a comment; blank
// lines are ignored. Keys match [A-Za-z0-9_.]+. Lists are comma-separated.
// Booleans are `true`/`false`. Duplicate keys are an error. Command-line
// flags override file keys through set().
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig from_file(const std::string& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }
  // Keys never read by the experiment; surfaced as manifest warnings so
  // config typos do not pass silently.
  std::vector<std::string> unused_keys() const;

 private:
  std::string require(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> accessed_;
};

}  // namespace dprf

#endif  // DPRF_CONFIG_HPP_
