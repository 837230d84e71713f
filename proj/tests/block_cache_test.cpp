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

#include <gtest/gtest.h>

#include <atomic>
#include <random>
#include <thread>

#include "hdoms/block_cache.hpp"
#include "hdoms/errors.hpp"
#include "test_util.hpp"

namespace hdoms {
namespace {

// Blocks of 8 references, 256 bits each: 256 payload bytes per block.
constexpr std::size_t kBlockBytes = 8 * 256 / 8;

LibraryIndex make_index(std::size_t n_blocks) {
  std::mt19937_64 rng(1);
  std::vector<RefRecord> refs;
  for (std::size_t i = 0; i < n_blocks * 8; ++i) {
    RefRecord r;
    r.ref_id = static_cast<std::uint32_t>(i);
    r.precursor_mz = 400.0 + static_cast<double>(i);
    r.charge = 2;
    r.hv = testing::random_hv(256, rng);
    refs.push_back(std::move(r));
  }
  PreprocessConfig pp;
  pp.mz_max = 100.0;
  pp.num_levels = 8;
  return build_index(std::move(refs), 8, pp, ItemMemory::generate(1000, 8, 256, 1));
}

TEST(BlockCache, SecondGetIsHit) {
  const auto index = make_index(2);
  auto cache = make_cache(index, BlockCache::kUnlimited);
  const auto a = cache.get({2, 0});
  const auto b = cache.get({2, 0});
  EXPECT_EQ(a, b);
  EXPECT_EQ(cache.counters().misses, 1U);
  EXPECT_EQ(cache.counters().hits, 1U);
  EXPECT_EQ(*a, index.block({2, 0}));
}

TEST(BlockCache, OneBlockBudgetEvicts) {
  const auto index = make_index(2);
  auto cache = make_cache(index, kBlockBytes);
  cache.get({2, 0});
  cache.get({2, 1});
  cache.get({2, 0});
  EXPECT_EQ(cache.counters().misses, 3U);
  EXPECT_EQ(cache.counters().hits, 0U);
  EXPECT_EQ(cache.counters().evictions, 2U);
  EXPECT_EQ(cache.resident_blocks(), 1U);
  EXPECT_LE(cache.resident_bytes(), kBlockBytes);
}

TEST(BlockCache, MatchesLruModel) {
  const auto index = make_index(12);
  std::mt19937_64 rng(2);
  for (std::size_t budget_blocks : {1, 4, 7}) {
    auto cache = make_cache(index, budget_blocks * kBlockBytes);
    std::vector<BlockKey> trace;
    for (int i = 0; i < 500; ++i) {
      // Skewed toward a sliding neighbourhood so hits actually occur.
      const auto base = static_cast<std::uint32_t>(i / 50);
      trace.push_back({2, (base + static_cast<std::uint32_t>(rng() % 4)) % 12});
    }
    for (const auto& k : trace) {
      cache.get(k);
      ASSERT_LE(cache.resident_bytes(), budget_blocks * kBlockBytes);
    }
    const auto model = testing::simulate_lru(trace, budget_blocks * kBlockBytes,
                                             [&](const BlockKey& k) { return index.block(k).payload_bytes(); });
    EXPECT_EQ(cache.counters().hits, model.hits);
    EXPECT_EQ(cache.counters().misses, model.misses);
    EXPECT_GT(model.hits, 0U);
  }
}

TEST(BlockCache, Errors) {
  const auto index = make_index(1);
  EXPECT_THROW(make_cache(index, 0), ConfigError);
  auto cache = make_cache(index, kBlockBytes - 1);
  EXPECT_THROW(cache.get({2, 0}), ConfigError);
  auto failing = BlockCache(1024, [](const BlockKey&) -> std::shared_ptr<const Block> { throw IoError("boom"); });
  EXPECT_THROW(failing.get({2, 0}), IoError);
}

TEST(BlockCache, ReaderBacked) {
  testing::TempDir dir;
  const auto index = make_index(5);
  save_index(index, dir.file("x.idx"));
  IndexReader reader(dir.file("x.idx"));
  auto cache = make_cache(reader, 2 * kBlockBytes);
  for (std::uint32_t b = 0; b < 5; ++b) EXPECT_EQ(*cache.get({2, b}), index.block({2, b}));
  EXPECT_EQ(cache.counters().misses, 5U);
}

TEST(BlockCache, ConcurrentCountersAreExact) {
  const auto index = make_index(6);
  auto cache = make_cache(index, 3 * kBlockBytes);
  constexpr int kThreads = 8;
  constexpr int kGets = 2000;
  std::atomic<int> wrong{0};
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < kThreads; ++t) {
      threads.emplace_back([&, t] {
        std::mt19937_64 rng(static_cast<std::uint64_t>(t));
        for (int i = 0; i < kGets; ++i) {
          const BlockKey key{2, static_cast<std::uint32_t>(rng() % 6)};
          if (cache.get(key)->ref_id.front() != key.index * 8) ++wrong;
        }
      });
    }
  }
  EXPECT_EQ(wrong.load(), 0);
  const auto c = cache.counters();
  EXPECT_EQ(c.hits + c.misses, static_cast<std::uint64_t>(kThreads * kGets));
  EXPECT_LE(cache.resident_bytes(), 3 * kBlockBytes);
}

}  // namespace
}  // namespace hdoms
