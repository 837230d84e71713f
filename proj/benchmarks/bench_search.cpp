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

#include <benchmark/benchmark.h>

#include "hdoms/block_cache.hpp"
#include "hdoms/library_index.hpp"
#include "hdoms/pipeline.hpp"
#include "hdoms/search.hpp"
#include "hdoms/synth.hpp"

namespace {

struct Fixture {
  hdoms::LibraryIndex index;
  std::vector<hdoms::EncodedQuery> queries;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    hdoms::SynthConfig sc;
    sc.n_refs = 20000;
    sc.n_queries = 1000;
    sc.perturb = 0.1;
    sc.dropout = 0.05;
    sc.mass_shift_fraction = 0.3;
    const auto data = hdoms::synthesize(sc);
    const auto im = hdoms::make_item_memory(sc.preprocess, hdoms::kDefaultDim, hdoms::kDefaultSeed);
    Fixture out;
    out.queries = hdoms::encode_queries(data.queries, sc.preprocess, im);
    out.index = hdoms::build_index(hdoms::encode_library(data.library, sc.preprocess, im), 1024, sc.preprocess, im);
    return out;
  }();
  return f;
}

void BM_ScoreGroup(benchmark::State& state) {
  const auto& f = fixture();
  const auto& block = f.index.blocks.front();
  std::vector<hdoms::HvView> views;
  for (int i = 0; i < state.range(0); ++i) views.push_back(f.queries[static_cast<std::size_t>(i)].hv.view());
  std::vector<std::int32_t> scores(views.size() * block.count());
  for (auto _ : state) {
    hdoms::score_group(views, block, scores);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(views.size() * block.count()));
}
BENCHMARK(BM_ScoreGroup)->Arg(1)->Arg(16)->Arg(64);

void BM_SearchAll(benchmark::State& state) {
  const auto& f = fixture();
  hdoms::SearchConfig cfg;
  cfg.open_tol_da = static_cast<double>(state.range(0));
  cfg.workers = static_cast<unsigned>(state.range(1));
  std::uint64_t comparisons = 0;
  for (auto _ : state) {
    auto cache = hdoms::make_cache(f.index, hdoms::BlockCache::kUnlimited);
    const auto r = hdoms::search_all(f.queries, f.index.manifest, cache, cfg);
    comparisons = r.stats.comparisons;
    benchmark::DoNotOptimize(r.open.data());
  }
  state.counters["comparisons"] = static_cast<double>(comparisons);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(comparisons));
}
BENCHMARK(BM_SearchAll)
    ->Args({20, 1})
    ->Args({75, 1})
    ->Args({150, 1})
    ->Args({75, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
