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

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hdoms {

enum class SearchMode : std::uint8_t { kStandard = 0, kOpen = 1 };

std::string_view to_string(SearchMode mode);
std::optional<SearchMode> parse_search_mode(std::string_view text);

// Best match of one query in one search mode.
struct Psm {
  std::uint32_t query_id = 0;
  std::string query_title;
  std::uint32_t ref_id = 0;
  std::string ref_title;
  SearchMode mode = SearchMode::kStandard;
  std::int32_t score = 0;
  double mass_diff = 0.0;  // query precursor m/z minus reference precursor m/z
  bool is_decoy = false;

  friend bool operator==(const Psm&, const Psm&) = default;
};

// Orders rows by query_id, standard before open. This is the on-disk order.
void sort_for_output(std::vector<Psm>& psms);

// Writes a header row followed by one tab-separated row per PSM in output
// order. Tabs, newlines and backslashes in titles are backslash-escaped.
// Returns the number of bytes written; throws IoError if the sink fails.
std::size_t write_psms(std::vector<Psm> psms, std::ostream& out);
void write_psms_file(const std::vector<Psm>& psms, const std::string& path);

// Inverse of write_psms.
std::vector<Psm> read_psms(std::istream& in);
std::vector<Psm> read_psms_file(const std::string& path);

inline constexpr std::string_view kPsmHeader =
    "query_id\tquery_title\tref_id\tref_title\tmode\tscore\tprecursor_mass_diff\tis_decoy";

}  // namespace hdoms
