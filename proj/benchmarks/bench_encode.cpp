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

#include "hdoms/encoder.hpp"
#include "hdoms/item_memory.hpp"
#include "hdoms/preprocess.hpp"
#include "hdoms/synth.hpp"

namespace {

void BM_Preprocess(benchmark::State& state) {
  hdoms::SynthConfig sc;
  sc.n_refs = 256;
  sc.n_queries = 0;
  sc.peaks = static_cast<std::uint32_t>(state.range(0));
  const auto data = hdoms::synthesize(sc);
  const hdoms::PreprocessConfig cfg;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hdoms::preprocess(data.library[i++ % data.library.size()], cfg));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Preprocess)->Arg(50)->Arg(200);

void BM_Encode(benchmark::State& state) {
  hdoms::SynthConfig sc;
  sc.n_refs = 256;
  sc.n_queries = 0;
  sc.peaks = static_cast<std::uint32_t>(state.range(0));
  const auto data = hdoms::synthesize(sc);
  const hdoms::PreprocessConfig cfg;
  const auto im = hdoms::ItemMemory::generate(cfg.bin_count(), static_cast<std::uint32_t>(cfg.num_levels), 4096, 42);
  std::vector<hdoms::QuantizedSpectrum> qs;
  for (const auto& s : data.library) qs.push_back(hdoms::preprocess(s, cfg));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hdoms::encode_spectrum(qs[i++ % qs.size()], im));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Encode)->Arg(50)->Arg(200);

void BM_ItemMemory(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hdoms::ItemMemory::generate(49000, 64, 4096, 42));
}
BENCHMARK(BM_ItemMemory)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
