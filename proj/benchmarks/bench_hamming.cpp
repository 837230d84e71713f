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

#include <random>
#include <vector>

#include "hdoms/hypervector.hpp"

namespace {

std::vector<hdoms::Word> random_words(std::size_t n, std::mt19937_64& rng) {
  std::vector<hdoms::Word> w(n);
  for (auto& x : w) x = rng();
  return w;
}

void BM_Hamming(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const hdoms::Hypervector a(dim, random_words(dim / 64, rng));
  const hdoms::Hypervector b(dim, random_words(dim / 64, rng));
  for (auto _ : state) benchmark::DoNotOptimize(hdoms::hamming(a, b));
  state.SetItemsProcessed(state.iterations());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(dim / 4));
}
BENCHMARK(BM_Hamming)->Arg(1024)->Arg(4096)->Arg(8192);

// One query against a contiguous run of references, as the search kernel sees them.
void BM_HammingRow(benchmark::State& state) {
  constexpr std::size_t kWords = 4096 / 64;
  const auto refs = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  const auto q = random_words(kWords, rng);
  const auto payload = random_words(kWords * refs, rng);
  std::vector<std::uint32_t> out(refs);
  for (auto _ : state) {
    for (std::size_t j = 0; j < refs; ++j) out[j] = hdoms::hamming_unchecked(q.data(), payload.data() + j * kWords, kWords);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(refs));
}
BENCHMARK(BM_HammingRow)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
