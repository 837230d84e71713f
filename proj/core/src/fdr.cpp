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

#include "hdoms/fdr.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hdoms/errors.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms {

void FdrConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("FDR threshold must be in (0, 1)");
}

void rank_psms(std::vector<Psm>& psms) {
  std::stable_sort(psms.begin(), psms.end(), [](const Psm& a, const Psm& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.is_decoy != b.is_decoy) return a.is_decoy;
    return a.query_id < b.query_id;
  });
}

FdrResult filter_fdr(std::vector<Psm> psms, const FdrConfig& cfg) {
  cfg.validate();
  rank_psms(psms);
  FdrResult result;
  std::size_t decoys = 0;
  std::size_t targets = 0;
  for (std::size_t k = 0; k < psms.size(); ++k) {
    if (psms[k].is_decoy) {
      ++decoys;
    } else {
      ++targets;
    }
    const double numerator = static_cast<double>(decoys + (cfg.conservative_plus_one ? 1 : 0));
    const double fdr = numerator / static_cast<double>(std::max<std::size_t>(targets, 1));
    if (fdr <= cfg.threshold) {
      result.prefix_length = k + 1;
      result.achieved_fdr = fdr;
    }
  }
  if (result.prefix_length > 0) result.cutoff = psms[result.prefix_length - 1].score;
  for (std::size_t k = 0; k < result.prefix_length; ++k) {
    if (!psms[k].is_decoy) result.accepted.push_back(std::move(psms[k]));
  }
  return result;
}

std::string FdrSummary::to_key_values() const {
  std::ostringstream out;
  const auto opt = [](const std::optional<std::int32_t>& v) { return v ? std::to_string(*v) : std::string("NA"); };
  out << "standard_accepted=" << standard_accepted << '\n'
      << "open_accepted=" << open_accepted << '\n'
      << "overlap=" << overlap << '\n'
      << "union=" << union_size << '\n'
      << "standard_cutoff=" << opt(standard_cutoff) << '\n'
      << "open_cutoff=" << opt(open_cutoff) << '\n'
      << "standard_fdr=" << text::format_double(standard_fdr) << '\n'
      << "open_fdr=" << text::format_double(open_fdr) << '\n';
  return out.str();
}

FdrSummary fdr_summary(const FdrResult& standard, const FdrResult& open) {
  FdrSummary s;
  std::set<std::uint32_t> a;
  std::set<std::uint32_t> b;
  for (const auto& p : standard.accepted) a.insert(p.query_id);
  for (const auto& p : open.accepted) b.insert(p.query_id);
  s.standard_accepted = standard.accepted.size();
  s.open_accepted = open.accepted.size();
  for (const auto id : a) s.overlap += b.count(id);
  s.union_size = a.size() + b.size() - s.overlap;
  s.standard_cutoff = standard.cutoff;
  s.open_cutoff = open.cutoff;
  s.standard_fdr = standard.achieved_fdr;
  s.open_fdr = open.achieved_fdr;
  return s;
}

}  // namespace hdoms
