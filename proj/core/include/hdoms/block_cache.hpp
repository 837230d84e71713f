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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "hdoms/library_index.hpp"

namespace hdoms {

struct CacheCounters {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
};

// LRU cache of blocks bounded by the sum of resident hypervector payload
// bytes. Thread-safe; returned blocks are immutable and stay valid after
// eviction for as long as the caller holds them.
class BlockCache {
 public:
  using Loader = std::function<std::shared_ptr<const Block>(const BlockKey&)>;

  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  BlockCache(std::size_t budget_bytes, Loader loader);

  // Hit or load. Throws ConfigError if the loaded block alone exceeds the
  // budget; loader errors propagate.
  std::shared_ptr<const Block> get(const BlockKey& key);

  CacheCounters counters() const;
  std::size_t resident_bytes() const;
  std::size_t resident_blocks() const;
  std::size_t budget() const noexcept { return budget_; }

  // Records every get() key in call order, for replaying against a model.
  void set_trace(bool enabled);
  std::vector<BlockKey> trace() const;

 private:
  struct Entry {
    std::shared_ptr<const Block> block;
    std::list<BlockKey>::iterator lru_pos;
  };

  std::size_t budget_;
  Loader loader_;
  mutable std::mutex mutex_;
  std::list<BlockKey> lru_;  // front = most recently used
  std::unordered_map<BlockKey, Entry, BlockKeyHash> resident_;
  std::size_t resident_bytes_ = 0;
  CacheCounters counters_;
  bool tracing_ = false;
  std::vector<BlockKey> trace_;
};

BlockCache make_cache(const IndexReader& reader, std::size_t budget_bytes);
BlockCache make_cache(const LibraryIndex& index, std::size_t budget_bytes);

}  // namespace hdoms
