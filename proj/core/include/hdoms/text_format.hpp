// Copyright 2026 The hdoms Authors.
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

#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Small text helpers shared by the MGF, TSV, config and index readers.
namespace hdoms::text {

std::string_view trim(std::string_view s);

// Shortest decimal representation that parses back to the identical double.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);
std::optional<unsigned long long> parse_uint(std::string_view s);
std::optional<bool> parse_bool(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_ws(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);
std::string to_upper(std::string_view s);

// key=value lines; '#' starts a comment, blank lines ignored. Returns pairs in
// file order with keys and values trimmed. Throws ParseError on a line with no '='.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view body);

}  // namespace hdoms::text
