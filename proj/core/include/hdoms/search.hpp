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
#include <span>
#include <string>
#include <vector>

#include "hdoms/block_cache.hpp"
#include "hdoms/hypervector.hpp"
#include "hdoms/library_index.hpp"
#include "hdoms/psm.hpp"

namespace hdoms {

struct SearchConfig {
  double tol_ppm = 20.0;       // standard search
  double open_tol_da = 75.0;   // open search half-window
  std::uint32_t q_block = 16;  // queries scored together against a block
  std::uint32_t max_q = 2048;  // queries staged per run segment
  bool count_comparisons = true;
  unsigned workers = 1;
  // FPGA stream-width divisor; accepted for parity with hardware configs,
  // has no effect on results.
  std::uint32_t factor = 16;

  void validate() const;
};

struct EncodedQuery {
  std::uint32_t id = 0;
  std::string title;
  double precursor_mz = 0.0;
  int charge = 0;
  Hypervector hv;
};

struct SearchStats {
  std::uint64_t queries = 0;
  std::uint64_t groups = 0;
  std::uint64_t segments = 0;
  std::uint64_t comparisons = 0;  // (query, reference) pairs scored
  std::uint64_t blocks_scored = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  double search_seconds = 0.0;

  std::string to_key_values() const;
};

struct SearchResult {
  std::vector<Psm> standard;  // ascending query_id
  std::vector<Psm> open;
  SearchStats stats;
};

// |q - r| / r * 1e6 <= tol_ppm; the reference m/z is the denominator.
bool in_standard_window(double query_pmz, double ref_pmz, double tol_ppm) noexcept;
// |q - r| <= open_tol_da
bool in_open_window(double query_pmz, double ref_pmz, double open_tol_da) noexcept;

// scores[i * block.count() + j] = similarity_score(queries[i], block.hv(j)).
// Adds queries.size() * block.count() to *comparisons when it is non-null.
void score_group(std::span<const HvView> queries, const Block& block, std::span<std::int32_t> scores,
                 std::uint64_t* comparisons = nullptr);
std::vector<std::int32_t> score_group(std::span<const HvView> queries, const Block& block,
                                      std::uint64_t* comparisons = nullptr);

// Sorted-query, blockwise search. Keeps the best reference per query for the
// standard and the open window separately; equal scores go to the smaller
// ref_id. Results do not depend on workers, q_block, max_q or the cache budget.
// Throws IncompatibleError if a query's dim differs from the index dim.
SearchResult search_all(const std::vector<EncodedQuery>& queries, const IndexManifest& manifest, BlockCache& cache,
                        const SearchConfig& cfg);

}  // namespace hdoms
