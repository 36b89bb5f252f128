// Copyright 2026 The flowsieve Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWSIEVE_KEYVALUE_HPP_
#define FLOWSIEVE_KEYVALUE_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowsieve {

// Flat `key = value` documents used for adapter and run-config files.
// '#' and ';' start comment lines; a value may be wrapped in double quotes
// to keep leading or trailing spaces. Keys are unique and keep file order.
struct KeyValueDocument {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(std::string_view key) const;
};

KeyValueDocument parse_key_values(std::string_view text, std::string_view source_name = "<text>");
KeyValueDocument read_key_values(const std::filesystem::path& path);

std::string_view trim(std::string_view s);

// Comma-separated list; items are trimmed, empty items dropped.
std::vector<std::string> split_list(std::string_view value);

}  // namespace flowsieve

#endif  // FLOWSIEVE_KEYVALUE_HPP_
