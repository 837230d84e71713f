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

#include "hdoms/block_cache.hpp"

#include <string>

#include "hdoms/errors.hpp"

namespace hdoms {

BlockCache::BlockCache(std::size_t budget_bytes, Loader loader) : budget_(budget_bytes), loader_(std::move(loader)) {
  if (budget_ == 0) throw ConfigError("cache budget must be > 0 bytes");
}

std::shared_ptr<const Block> BlockCache::get(const BlockKey& key) {
  std::lock_guard lock(mutex_);
  if (tracing_) trace_.push_back(key);
  if (auto it = resident_.find(key); it != resident_.end()) {
    ++counters_.hits;
    lru_.splice(lru_.begin(), lru_, it->second.lru_pos);
    return it->second.block;
  }
  ++counters_.misses;
  auto block = loader_(key);
  const std::size_t bytes = block->payload_bytes();
  if (bytes > budget_) {
    throw ConfigError("block (charge " + std::to_string(key.charge) + ", #" + std::to_string(key.index) +
                      ") needs " + std::to_string(bytes) + " bytes, cache budget is " + std::to_string(budget_));
  }
  while (resident_bytes_ + bytes > budget_) {
    const BlockKey victim = lru_.back();
    lru_.pop_back();
    auto vit = resident_.find(victim);
    resident_bytes_ -= vit->second.block->payload_bytes();
    resident_.erase(vit);
    ++counters_.evictions;
  }
  lru_.push_front(key);
  resident_.emplace(key, Entry{block, lru_.begin()});
  resident_bytes_ += bytes;
  return block;
}

CacheCounters BlockCache::counters() const {
  std::lock_guard lock(mutex_);
  return counters_;
}

std::size_t BlockCache::resident_bytes() const {
  std::lock_guard lock(mutex_);
  return resident_bytes_;
}

std::size_t BlockCache::resident_blocks() const {
  std::lock_guard lock(mutex_);
  return resident_.size();
}

void BlockCache::set_trace(bool enabled) {
  std::lock_guard lock(mutex_);
  tracing_ = enabled;
  trace_.clear();
}

std::vector<BlockKey> BlockCache::trace() const {
  std::lock_guard lock(mutex_);
  return trace_;
}

BlockCache make_cache(const IndexReader& reader, std::size_t budget_bytes) {
  return BlockCache(budget_bytes, [&reader](const BlockKey& key) { return reader.read_block(key); });
}

BlockCache make_cache(const LibraryIndex& index, std::size_t budget_bytes) {
  // Copies into shared ownership so residency accounting matches the file-backed case.
  return BlockCache(budget_bytes,
                    [&index](const BlockKey& key) { return std::make_shared<const Block>(index.block(key)); });
}

}  // namespace hdoms
