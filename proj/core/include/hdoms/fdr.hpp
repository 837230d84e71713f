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
#include <optional>
#include <string>
#include <vector>

#include "hdoms/psm.hpp"

namespace hdoms {

struct FdrConfig {
  double threshold = 0.01;
  // Use (decoys + 1) / targets instead of decoys / targets.
  bool conservative_plus_one = false;

  void validate() const;
};

struct FdrResult {
  std::vector<Psm> accepted;          // targets only, in rank order
  std::optional<std::int32_t> cutoff;  // score of the last Psm in the accepted prefix
  double achieved_fdr = 0.0;
  std::size_t prefix_length = 0;       // ranked Psms covered, decoys included
};

// Rank order used by filter_fdr: score descending, decoys before targets on
// equal scores, then query_id ascending.
void rank_psms(std::vector<Psm>& psms);

// Target-decoy filtering of one mode's PSMs: the accepted set is the longest
// ranked prefix whose decoy / max(targets, 1) ratio is within the threshold.
FdrResult filter_fdr(std::vector<Psm> psms, const FdrConfig& cfg);

struct FdrSummary {
  std::size_t standard_accepted = 0;
  std::size_t open_accepted = 0;
  std::size_t overlap = 0;  // query_ids accepted in both modes
  std::size_t union_size = 0;
  std::optional<std::int32_t> standard_cutoff;
  std::optional<std::int32_t> open_cutoff;
  double standard_fdr = 0.0;
  double open_fdr = 0.0;

  std::string to_key_values() const;
};

FdrSummary fdr_summary(const FdrResult& standard, const FdrResult& open);

}  // namespace hdoms
