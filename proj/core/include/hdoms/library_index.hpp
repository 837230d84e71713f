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
#include <functional>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "hdoms/hypervector.hpp"
#include "hdoms/item_memory.hpp"
#include "hdoms/preprocess.hpp"

namespace hdoms {

inline constexpr char kIndexMagic[8] = {'R', 'A', 'P', 'I', 'D', 'O', 'M', 'S'};
inline constexpr std::uint32_t kIndexVersion = 1;
inline constexpr std::uint32_t kDefaultMaxR = 4096;

struct RefRecord {
  std::uint32_t ref_id = 0;
  std::string title;
  double precursor_mz = 0.0;
  int charge = 0;
  bool is_decoy = false;
  Hypervector hv;
};

struct BlockKey {
  int charge = 0;
  std::uint32_t index = 0;  // ordinal within the charge partition

  friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

struct BlockKeyHash {
  std::size_t operator()(const BlockKey& k) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.charge) << 32) | k.index);
  }
};

// Up to MAX_R references of one charge, sorted by precursor m/z, with their
// hypervectors packed contiguously.
struct Block {
  int charge = 0;
  double min_pmz = 0.0;
  double max_pmz = 0.0;
  std::vector<double> pmz;
  std::vector<std::uint32_t> ref_id;
  std::vector<std::uint8_t> decoy;
  std::vector<std::string> titles;
  std::vector<Word> hv_payload;
  std::size_t words_per_hv = 0;

  std::size_t count() const noexcept { return pmz.size(); }
  HvView hv(std::size_t j) const noexcept { return {hv_payload.data() + j * words_per_hv, words_per_hv}; }
  std::size_t payload_bytes() const noexcept { return hv_payload.size() * sizeof(Word); }

  friend bool operator==(const Block&, const Block&) = default;
};

struct BlockMeta {
  std::uint64_t offset = 0;  // file offset of the block record; 0 for in-memory indexes
  std::uint32_t count = 0;
  double min_pmz = 0.0;
  double max_pmz = 0.0;
};

struct ChargePartition {
  int charge = 0;
  std::vector<BlockMeta> blocks;  // ascending by min_pmz
};

struct IndexManifest {
  std::uint32_t version = kIndexVersion;
  std::uint32_t dim = 0;
  std::uint32_t max_r = kDefaultMaxR;
  PreprocessConfig preprocess;
  std::vector<ChargePartition> partitions;  // ascending by charge

  const ChargePartition* partition(int charge) const;
  const BlockMeta& meta(const BlockKey& key) const;
  std::size_t block_count() const;
  std::size_t record_count() const;
  std::vector<BlockKey> all_blocks() const;
};

// In-memory index: what build_index produces and load_index returns.
struct LibraryIndex {
  IndexManifest manifest;
  ItemMemory item_memory;
  std::vector<Block> blocks;  // manifest order: by charge, then block ordinal

  const Block& block(const BlockKey& key) const;
};

// Groups by charge, sorts by (precursor_mz, ref_id) and chunks into blocks of
// max_r. Throws IncompatibleError when a hypervector's dim differs from the
// item memory's, ConfigError for max_r == 0 or a charge outside [1, 255].
LibraryIndex build_index(std::vector<RefRecord> refs, std::uint32_t max_r, const PreprocessConfig& preprocess,
                         ItemMemory item_memory);

// Serialized layout (little-endian): magic, version, dim, MAX_R, preprocess
// text, item memory, partition count; per partition charge (u8) and block
// count; per block count, min/max pmz, pmz[], ref_id[], decoy[], titles,
// packed hypervectors.
void write_index(const LibraryIndex& index, std::ostream& out);

// Writes to a temporary sibling and renames, so a failed write leaves no
// partial file at path.
void save_index(const LibraryIndex& index, const std::string& path);

LibraryIndex load_index(const std::string& path);

// Blocks of the charge whose [min_pmz, max_pmz] intersects [lo, hi], by
// binary search. Unknown charge gives an empty list.
std::vector<BlockKey> select_blocks(const IndexManifest& manifest, int charge, double lo, double hi);

// Random access to an index file: manifest and item memory resident, blocks
// read on demand. read_block is safe to call concurrently.
class IndexReader {
 public:
  explicit IndexReader(const std::string& path);

  const IndexManifest& manifest() const noexcept { return manifest_; }
  const ItemMemory& item_memory() const noexcept { return item_memory_; }
  const std::string& path() const noexcept { return path_; }

  std::shared_ptr<const Block> read_block(const BlockKey& key) const;

 private:
  std::string path_;
  IndexManifest manifest_;
  ItemMemory item_memory_;
  mutable std::mutex mutex_;
  mutable std::ifstream file_;
};

}  // namespace hdoms
