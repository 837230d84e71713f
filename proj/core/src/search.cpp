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

#include "hdoms/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "hdoms/errors.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms {

void SearchConfig::validate() const {
  if (!(tol_ppm > 0.0)) throw ConfigError("tol_ppm must be > 0");
  if (!(open_tol_da > 0.0)) throw ConfigError("open_tol_da must be > 0");
  if (q_block < 1) throw ConfigError("Q_BLOCK must be >= 1");
  if (max_q < q_block) throw ConfigError("MAX_Q must be >= Q_BLOCK");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (factor < 1) throw ConfigError("FACTOR must be >= 1");
}

std::string SearchStats::to_key_values() const {
  std::ostringstream out;
  out << "queries=" << queries << '\n'
      << "groups=" << groups << '\n'
      << "segments=" << segments << '\n'
      << "comparisons=" << comparisons << '\n'
      << "blocks_scored=" << blocks_scored << '\n'
      << "cache_hits=" << cache_hits << '\n'
      << "cache_misses=" << cache_misses << '\n'
      << "search_seconds=" << text::format_double(search_seconds) << '\n';
  return out.str();
}

bool in_standard_window(double query_pmz, double ref_pmz, double tol_ppm) noexcept {
  return std::abs(query_pmz - ref_pmz) / ref_pmz * 1e6 <= tol_ppm;
}

bool in_open_window(double query_pmz, double ref_pmz, double open_tol_da) noexcept {
  return std::abs(query_pmz - ref_pmz) <= open_tol_da;
}

void score_group(std::span<const HvView> queries, const Block& block, std::span<std::int32_t> scores,
                 std::uint64_t* comparisons) {
  const std::size_t n = block.count();
  const std::size_t words = block.words_per_hv;
  if (scores.size() < queries.size() * n) throw Error("score_group: score buffer too small");
  for (const auto& q : queries) {
    if (q.size() != words) throw IncompatibleError("score_group: query and block dimensions differ");
  }
  const auto dim = static_cast<std::int32_t>(words * kWordBits);
  for (std::size_t j = 0; j < n; ++j) {
    const Word* ref = block.hv_payload.data() + j * words;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      scores[i * n + j] = dim - static_cast<std::int32_t>(hamming_unchecked(queries[i].data(), ref, words));
    }
  }
  if (comparisons != nullptr) *comparisons += queries.size() * n;
}

std::vector<std::int32_t> score_group(std::span<const HvView> queries, const Block& block,
                                      std::uint64_t* comparisons) {
  std::vector<std::int32_t> scores(queries.size() * block.count());
  score_group(queries, block, scores, comparisons);
  return scores;
}

namespace {

struct Best {
  std::int32_t score = -1;
  std::uint32_t ref_id = 0;
  double ref_pmz = 0.0;
  bool decoy = false;
  std::string title;

  bool improves(std::int32_t s, std::uint32_t id) const noexcept {
    return s > score || (s == score && id < ref_id);
  }
};

struct QueryState {
  Best standard;
  Best open;
};

struct Group {
  std::size_t begin = 0;  // range into the sorted query order
  std::size_t end = 0;
};

struct WorkerTally {
  std::uint64_t comparisons = 0;
  std::uint64_t blocks = 0;
};

// Lowest and highest reference m/z that either window can accept for q.
std::pair<double, double> candidate_range(double q, const SearchConfig& cfg) {
  const double t = cfg.tol_ppm * 1e-6;
  double lo = std::min(q - cfg.open_tol_da, q / (1.0 + t));
  double hi = t < 1.0 ? std::max(q + cfg.open_tol_da, q / (1.0 - t)) : std::numeric_limits<double>::infinity();
  // Widen so rounding in the window predicates cannot fall outside the selection.
  lo -= 1e-6 + std::abs(lo) * 1e-9;
  hi += 1e-6 + std::abs(hi) * 1e-9;
  return {lo, hi};
}

void process_group(const Group& g, const std::vector<std::size_t>& order, const std::vector<EncodedQuery>& queries,
                   const IndexManifest& manifest, BlockCache& cache, const SearchConfig& cfg,
                   std::vector<QueryState>& states, std::vector<std::int32_t>& scores, WorkerTally& tally) {
  const int charge = queries[order[g.begin]].charge;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<HvView> hvs;
  hvs.reserve(g.end - g.begin);
  for (std::size_t k = g.begin; k < g.end; ++k) {
    const auto& q = queries[order[k]];
    const auto [qlo, qhi] = candidate_range(q.precursor_mz, cfg);
    lo = std::min(lo, qlo);
    hi = std::max(hi, qhi);
    hvs.push_back(q.hv.view());
  }
  for (const auto& key : select_blocks(manifest, charge, lo, hi)) {
    const auto block = cache.get(key);
    const std::size_t n = block->count();
    if (scores.size() < hvs.size() * n) scores.resize(hvs.size() * n);
    score_group(hvs, *block, scores, cfg.count_comparisons ? &tally.comparisons : nullptr);
    ++tally.blocks;
    for (std::size_t i = 0; i < hvs.size(); ++i) {
      const auto& q = queries[order[g.begin + i]];
      auto& st = states[order[g.begin + i]];
      for (std::size_t j = 0; j < n; ++j) {
        const double r = block->pmz[j];
        const std::int32_t s = scores[i * n + j];
        const std::uint32_t id = block->ref_id[j];
        if (in_open_window(q.precursor_mz, r, cfg.open_tol_da) && st.open.improves(s, id)) {
          st.open = {s, id, r, block->decoy[j] != 0, block->titles[j]};
        }
        if (in_standard_window(q.precursor_mz, r, cfg.tol_ppm) && st.standard.improves(s, id)) {
          st.standard = {s, id, r, block->decoy[j] != 0, block->titles[j]};
        }
      }
    }
  }
}

Psm make_psm(const EncodedQuery& q, const Best& b, SearchMode mode) {
  Psm p;
  p.query_id = q.id;
  p.query_title = q.title;
  p.ref_id = b.ref_id;
  p.ref_title = b.title;
  p.mode = mode;
  p.score = b.score;
  p.mass_diff = q.precursor_mz - b.ref_pmz;
  p.is_decoy = b.decoy;
  return p;
}

}  // namespace

SearchResult search_all(const std::vector<EncodedQuery>& queries, const IndexManifest& manifest, BlockCache& cache,
                        const SearchConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  for (const auto& q : queries) {
    if (q.hv.dim() != manifest.dim) {
      throw IncompatibleError("query " + std::to_string(q.id) + " has dim " + std::to_string(q.hv.dim()) +
                              ", index dim is " + std::to_string(manifest.dim));
    }
  }

  std::vector<std::size_t> order(queries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& qa = queries[a];
    const auto& qb = queries[b];
    if (qa.charge != qb.charge) return qa.charge < qb.charge;
    if (qa.precursor_mz != qb.precursor_mz) return qa.precursor_mz < qb.precursor_mz;
    return qa.id < qb.id;
  });

  // Segments of max_q sorted queries, each cut into groups of at most q_block
  // that never straddle a charge boundary.
  std::vector<Group> groups;
  SearchStats stats;
  for (std::size_t seg = 0; seg < order.size(); seg += cfg.max_q) {
    ++stats.segments;
    const std::size_t seg_end = std::min(order.size(), seg + cfg.max_q);
    std::size_t begin = seg;
    while (begin < seg_end) {
      const int charge = queries[order[begin]].charge;
      std::size_t end = begin;
      while (end < seg_end && end - begin < cfg.q_block && queries[order[end]].charge == charge) ++end;
      groups.push_back({begin, end});
      begin = end;
    }
  }

  const CacheCounters before = cache.counters();
  std::vector<QueryState> states(queries.size());
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.workers, static_cast<unsigned>(groups.size())));
  std::vector<WorkerTally> tallies(workers);

  if (workers == 1) {
    std::vector<std::int32_t> scores;
    for (const auto& g : groups) process_group(g, order, queries, manifest, cache, cfg, states, scores, tallies[0]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          std::vector<std::int32_t> scores;
          try {
            for (std::size_t i = next++; i < groups.size(); i = next++) {
              process_group(groups[i], order, queries, manifest, cache, cfg, states, scores, tallies[w]);
            }
          } catch (...) {
            errors[w] = std::current_exception();
            next = groups.size();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SearchResult result;
  std::vector<std::size_t> by_id(queries.size());
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::stable_sort(by_id.begin(), by_id.end(),
                   [&](std::size_t a, std::size_t b) { return queries[a].id < queries[b].id; });
  for (const std::size_t i : by_id) {
    if (states[i].standard.score >= 0) result.standard.push_back(make_psm(queries[i], states[i].standard, SearchMode::kStandard));
    if (states[i].open.score >= 0) result.open.push_back(make_psm(queries[i], states[i].open, SearchMode::kOpen));
  }

  const CacheCounters after = cache.counters();
  stats.queries = queries.size();
  stats.groups = groups.size();
  for (const auto& t : tallies) {
    stats.comparisons += t.comparisons;
    stats.blocks_scored += t.blocks;
  }
  stats.cache_hits = after.hits - before.hits;
  stats.cache_misses = after.misses - before.misses;
  stats.search_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.stats = std::move(stats);
  return result;
}

}  // namespace hdoms
