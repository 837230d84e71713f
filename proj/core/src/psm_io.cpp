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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hdoms/errors.hpp"
#include "hdoms/psm.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms {

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::kStandard ? "standard" : "open";
}

std::optional<SearchMode> parse_search_mode(std::string_view text) {
  if (text == "standard") return SearchMode::kStandard;
  if (text == "open") return SearchMode::kOpen;
  return std::nullopt;
}

void sort_for_output(std::vector<Psm>& psms) {
  std::stable_sort(psms.begin(), psms.end(), [](const Psm& a, const Psm& b) {
    if (a.query_id != b.query_id) return a.query_id < b.query_id;
    return a.mode < b.mode;
  });
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s, std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw ParseError(line, "dangling escape");
    switch (s[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: throw ParseError(line, "unknown escape");
    }
  }
  return out;
}

}  // namespace

std::size_t write_psms(std::vector<Psm> psms, std::ostream& out) {
  sort_for_output(psms);
  std::ostringstream buf;
  buf << kPsmHeader << '\n';
  for (const auto& p : psms) {
    buf << p.query_id << '\t' << escape(p.query_title) << '\t' << p.ref_id << '\t'
        << escape(p.ref_title) << '\t' << to_string(p.mode) << '\t' << p.score << '\t'
        << text::format_double(p.mass_diff) << '\t' << (p.is_decoy ? 1 : 0) << '\n';
  }
  const std::string body = buf.str();
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  out.flush();
  if (!out) throw IoError("PSM write failed");
  return body.size();
}

void write_psms_file(const std::vector<Psm>& psms, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  write_psms(psms, out);
}

std::vector<Psm> read_psms(std::istream& in) {
  std::vector<Psm> psms;
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw)) return psms;
  ++line_no;
  if (raw != kPsmHeader) throw ParseError(line_no, "unexpected PSM header");
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty()) continue;
    const auto f = text::split(raw, '\t');
    if (f.size() != 8) throw ParseError(line_no, "expected 8 columns");
    Psm p;
    const auto qid = text::parse_uint(f[0]);
    const auto rid = text::parse_uint(f[2]);
    const auto mode = parse_search_mode(f[4]);
    const auto score = text::parse_int(f[5]);
    const auto diff = text::parse_double(f[6]);
    const auto decoy = text::parse_int(f[7]);
    if (!qid || !rid || !mode || !score || !diff || !decoy || *qid > UINT32_MAX || *rid > UINT32_MAX) {
      throw ParseError(line_no, "malformed PSM row");
    }
    p.query_id = static_cast<std::uint32_t>(*qid);
    p.query_title = unescape(f[1], line_no);
    p.ref_id = static_cast<std::uint32_t>(*rid);
    p.ref_title = unescape(f[3], line_no);
    p.mode = *mode;
    p.score = static_cast<std::int32_t>(*score);
    p.mass_diff = *diff;
    p.is_decoy = *decoy != 0;
    psms.push_back(std::move(p));
  }
  return psms;
}

std::vector<Psm> read_psms_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_psms(in);
}

}  // namespace hdoms
