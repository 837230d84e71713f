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

#include "hdoms/mgf.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>

#include "hdoms/errors.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms {

void normalize_peaks(std::vector<Peak>& peaks) {
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.mz < b.mz; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (out > 0 && peaks[out - 1].mz == peaks[i].mz) {
      peaks[out - 1].intensity += peaks[i].intensity;
    } else {
      peaks[out++] = peaks[i];
    }
  }
  peaks.resize(out);
}

int parse_charge(std::string_view text) {
  text = text::trim(text);
  if (text.empty()) return 0;
  if (text.back() == '+') {
    text.remove_suffix(1);
  } else if (text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty() || text.front() == '+' || text.front() == '-') return 0;
  const auto v = text::parse_int(text);
  if (!v || *v < 1 || *v > kMaxCharge) return 0;
  return static_cast<int>(*v);
}

namespace {

struct PendingRecord {
  std::string title;
  std::optional<double> precursor_mz;
  int charge = 0;
  bool charge_seen = false;
  std::vector<Peak> peaks;
};

bool is_header_line(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos || eq == 0) return false;
  const unsigned char first = static_cast<unsigned char>(line.front());
  return std::isalpha(first) != 0;
}

}  // namespace

MgfReadResult parse_mgf(std::istream& in, std::string_view decoy_prefix) {
  MgfReadResult result;
  std::optional<PendingRecord> current;
  std::size_t begin_line = 0;
  std::size_t line_no = 0;
  std::string raw;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty()) continue;

    if (text::starts_with_ci(line, "BEGIN IONS")) {
      if (current) throw ParseError(line_no, "BEGIN IONS inside unterminated block opened at line " +
                                                 std::to_string(begin_line));
      current.emplace();
      begin_line = line_no;
      continue;
    }
    if (text::starts_with_ci(line, "END IONS")) {
      if (!current) throw ParseError(line_no, "END IONS without BEGIN IONS");
      PendingRecord rec = std::move(*current);
      current.reset();
      if (rec.charge == 0 || !rec.precursor_mz || *rec.precursor_mz <= 0.0) {
        ++result.skipped;
        continue;
      }
      Spectrum s;
      s.id = static_cast<std::uint32_t>(result.spectra.size());
      s.is_decoy = !decoy_prefix.empty() && std::string_view(rec.title).starts_with(decoy_prefix);
      s.title = std::move(rec.title);
      s.precursor_mz = *rec.precursor_mz;
      s.charge = rec.charge;
      s.peaks = std::move(rec.peaks);
      normalize_peaks(s.peaks);
      result.spectra.push_back(std::move(s));
      continue;
    }
    if (!current) {
      // Global parameters and comments between blocks carry nothing we use.
      continue;
    }
    if (is_header_line(line)) {
      const auto eq = line.find('=');
      const std::string key = text::to_upper(text::trim(line.substr(0, eq)));
      const std::string_view value = text::trim(line.substr(eq + 1));
      if (key == "TITLE") {
        current->title = std::string(value);
      } else if (key == "PEPMASS") {
        const auto tokens = text::split_ws(value);
        current->precursor_mz = tokens.empty() ? std::nullopt : text::parse_double(tokens.front());
      } else if (key == "CHARGE") {
        current->charge = parse_charge(value);
      }
      continue;
    }
    const auto tokens = text::split_ws(line);
    if (tokens.size() < 2) throw ParseError(line_no, "peak line needs m/z and intensity");
    const auto mz = text::parse_double(tokens[0]);
    const auto intensity = text::parse_double(tokens[1]);
    if (!mz || !intensity) throw ParseError(line_no, "non-numeric peak line");
    if (*mz <= 0.0 || *intensity < 0.0) throw ParseError(line_no, "peak m/z must be > 0 and intensity >= 0");
    current->peaks.push_back({*mz, *intensity});
  }
  if (current) {
    throw ParseError(line_no, "unterminated block opened at line " + std::to_string(begin_line));
  }
  return result;
}

MgfReadResult parse_mgf_file(const std::string& path, std::string_view decoy_prefix) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  auto result = parse_mgf(in, decoy_prefix);
  if (in.bad()) throw IoError("read failure on " + path);
  return result;
}

void write_mgf_record(std::ostream& out, const Spectrum& s) {
  out << "BEGIN IONS\n";
  out << "TITLE=" << s.title << '\n';
  out << "PEPMASS=" << text::format_double(s.precursor_mz) << '\n';
  out << "CHARGE=" << s.charge << "+\n";
  for (const auto& p : s.peaks) {
    out << text::format_double(p.mz) << ' ' << text::format_double(p.intensity) << '\n';
  }
  out << "END IONS\n\n";
}

void write_mgf(std::ostream& out, const std::vector<Spectrum>& spectra) {
  for (const auto& s : spectra) write_mgf_record(out, s);
  if (!out) throw IoError("MGF write failed");
}

}  // namespace hdoms
