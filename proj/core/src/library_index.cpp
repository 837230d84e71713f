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

#include "hdoms/library_index.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>

#include <unistd.h>

#include "binary_io.hpp"
#include "hdoms/errors.hpp"

namespace hdoms {

const ChargePartition* IndexManifest::partition(int charge) const {
  const auto it = std::lower_bound(partitions.begin(), partitions.end(), charge,
                                   [](const ChargePartition& p, int c) { return p.charge < c; });
  return (it != partitions.end() && it->charge == charge) ? &*it : nullptr;
}

const BlockMeta& IndexManifest::meta(const BlockKey& key) const {
  const auto* part = partition(key.charge);
  if (part == nullptr || key.index >= part->blocks.size()) {
    throw Error("no block " + std::to_string(key.index) + " for charge " + std::to_string(key.charge));
  }
  return part->blocks[key.index];
}

std::size_t IndexManifest::block_count() const {
  std::size_t n = 0;
  for (const auto& p : partitions) n += p.blocks.size();
  return n;
}

std::size_t IndexManifest::record_count() const {
  std::size_t n = 0;
  for (const auto& p : partitions) {
    for (const auto& b : p.blocks) n += b.count;
  }
  return n;
}

std::vector<BlockKey> IndexManifest::all_blocks() const {
  std::vector<BlockKey> keys;
  for (const auto& p : partitions) {
    for (std::uint32_t i = 0; i < p.blocks.size(); ++i) keys.push_back({p.charge, i});
  }
  return keys;
}

const Block& LibraryIndex::block(const BlockKey& key) const {
  std::size_t offset = 0;
  for (const auto& p : manifest.partitions) {
    if (p.charge == key.charge) {
      if (key.index >= p.blocks.size()) break;
      return blocks[offset + key.index];
    }
    offset += p.blocks.size();
  }
  throw Error("no block " + std::to_string(key.index) + " for charge " + std::to_string(key.charge));
}

LibraryIndex build_index(std::vector<RefRecord> refs, std::uint32_t max_r, const PreprocessConfig& preprocess,
                         ItemMemory item_memory) {
  if (max_r == 0) throw ConfigError("MAX_R must be >= 1");
  const std::size_t words = item_memory.word_count();
  std::map<int, std::vector<RefRecord*>> by_charge;
  for (auto& r : refs) {
    if (r.hv.dim() != item_memory.dim()) {
      throw IncompatibleError("reference " + std::to_string(r.ref_id) + " has dim " +
                              std::to_string(r.hv.dim()) + ", index dim is " +
                              std::to_string(item_memory.dim()));
    }
    if (r.charge < 1 || r.charge > 255) {
      throw ConfigError("reference " + std::to_string(r.ref_id) + " has unsupported charge " +
                        std::to_string(r.charge));
    }
    if (!(r.precursor_mz > 0.0)) {
      throw ConfigError("reference " + std::to_string(r.ref_id) + " has non-positive precursor m/z");
    }
    by_charge[r.charge].push_back(&r);
  }

  LibraryIndex index;
  index.manifest.dim = item_memory.dim();
  index.manifest.max_r = max_r;
  index.manifest.preprocess = preprocess;
  for (auto& [charge, members] : by_charge) {
    std::sort(members.begin(), members.end(), [](const RefRecord* a, const RefRecord* b) {
      if (a->precursor_mz != b->precursor_mz) return a->precursor_mz < b->precursor_mz;
      return a->ref_id < b->ref_id;
    });
    ChargePartition part;
    part.charge = charge;
    for (std::size_t start = 0; start < members.size(); start += max_r) {
      const std::size_t end = std::min(members.size(), start + max_r);
      Block block;
      block.charge = charge;
      block.words_per_hv = words;
      block.hv_payload.reserve((end - start) * words);
      for (std::size_t i = start; i < end; ++i) {
        RefRecord& r = *members[i];
        block.pmz.push_back(r.precursor_mz);
        block.ref_id.push_back(r.ref_id);
        block.decoy.push_back(r.is_decoy ? 1 : 0);
        block.titles.push_back(std::move(r.title));
        block.hv_payload.insert(block.hv_payload.end(), r.hv.words().begin(), r.hv.words().end());
      }
      block.min_pmz = block.pmz.front();
      block.max_pmz = block.pmz.back();
      part.blocks.push_back({0, static_cast<std::uint32_t>(block.count()), block.min_pmz, block.max_pmz});
      index.blocks.push_back(std::move(block));
    }
    index.manifest.partitions.push_back(std::move(part));
  }
  index.item_memory = std::move(item_memory);
  return index;
}

namespace {

void write_block(std::ostream& out, const Block& b) {
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(b.count()));
  detail::put<double>(out, b.min_pmz);
  detail::put<double>(out, b.max_pmz);
  detail::put_array<double>(out, b.pmz);
  detail::put_array<std::uint32_t>(out, b.ref_id);
  detail::put_array<std::uint8_t>(out, b.decoy);
  for (const auto& t : b.titles) detail::put_string(out, t);
  detail::put_array<Word>(out, b.hv_payload);
}

Block read_block_body(std::istream& in, int charge, std::size_t words, std::uint32_t max_r) {
  Block b;
  b.charge = charge;
  b.words_per_hv = words;
  const auto count = detail::get<std::uint32_t>(in);
  if (count == 0 || count > max_r) throw IncompatibleError("corrupt block: count " + std::to_string(count));
  b.min_pmz = detail::get<double>(in);
  b.max_pmz = detail::get<double>(in);
  b.pmz.resize(count);
  b.ref_id.resize(count);
  b.decoy.resize(count);
  b.titles.resize(count);
  b.hv_payload.resize(static_cast<std::size_t>(count) * words);
  detail::get_array<double>(in, b.pmz);
  detail::get_array<std::uint32_t>(in, b.ref_id);
  detail::get_array<std::uint8_t>(in, b.decoy);
  for (auto& t : b.titles) t = detail::get_string(in);
  detail::get_array<Word>(in, b.hv_payload);
  return b;
}

struct Header {
  IndexManifest manifest;
  ItemMemory item_memory;
};

Header read_header(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (in.gcount() != sizeof magic || !std::equal(magic, magic + 8, kIndexMagic)) {
    throw IncompatibleError("not an index file (bad magic)");
  }
  Header h;
  h.manifest.version = detail::get<std::uint32_t>(in);
  if (h.manifest.version != kIndexVersion) {
    throw IncompatibleError("index format version " + std::to_string(h.manifest.version) +
                            " is not supported (this build reads version " + std::to_string(kIndexVersion) +
                            ")");
  }
  h.manifest.dim = detail::get<std::uint32_t>(in);
  h.manifest.max_r = detail::get<std::uint32_t>(in);
  if (h.manifest.max_r == 0) throw IncompatibleError("corrupt index: MAX_R is 0");
  h.manifest.preprocess = PreprocessConfig::from_text(detail::get_string(in, 1U << 20));
  h.item_memory = ItemMemory::deserialize(in);
  if (h.item_memory.dim() != h.manifest.dim) {
    throw IncompatibleError("index dim " + std::to_string(h.manifest.dim) + " disagrees with item memory dim " +
                            std::to_string(h.item_memory.dim()));
  }
  if (h.item_memory.bin_count() != h.manifest.preprocess.bin_count() ||
      h.item_memory.level_count() != static_cast<std::uint32_t>(h.manifest.preprocess.num_levels)) {
    throw IncompatibleError("item memory shape disagrees with preprocess configuration");
  }
  return h;
}

void write_header(std::ostream& out, const LibraryIndex& index) {
  out.write(kIndexMagic, sizeof kIndexMagic);
  detail::put<std::uint32_t>(out, kIndexVersion);
  detail::put<std::uint32_t>(out, index.manifest.dim);
  detail::put<std::uint32_t>(out, index.manifest.max_r);
  detail::put_string(out, index.manifest.preprocess.to_text());
  index.item_memory.serialize(out);
}

}  // namespace

void write_index(const LibraryIndex& index, std::ostream& out) {
  if (index.item_memory.dim() != index.manifest.dim) {
    throw IncompatibleError("index dim disagrees with item memory dim");
  }
  write_header(out, index);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(index.manifest.partitions.size()));
  std::size_t next = 0;
  for (const auto& part : index.manifest.partitions) {
    detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(part.charge));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(part.blocks.size()));
    for (std::size_t i = 0; i < part.blocks.size(); ++i) write_block(out, index.blocks[next++]);
  }
  if (!out) throw IoError("index write failed");
}

void save_index(const LibraryIndex& index, const std::string& path) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot create " + tmp);
      write_index(index, out);
      out.flush();
      if (!out) throw IoError("write failed on " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

LibraryIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Header h = read_header(in);
  LibraryIndex index;
  index.manifest = std::move(h.manifest);
  index.item_memory = std::move(h.item_memory);
  const auto parts = detail::get<std::uint32_t>(in);
  const std::size_t words = index.item_memory.word_count();
  for (std::uint32_t p = 0; p < parts; ++p) {
    ChargePartition part;
    part.charge = detail::get<std::uint8_t>(in);
    const auto blocks = detail::get<std::uint32_t>(in);
    for (std::uint32_t b = 0; b < blocks; ++b) {
      const auto offset = static_cast<std::uint64_t>(in.tellg());
      Block block = read_block_body(in, part.charge, words, index.manifest.max_r);
      part.blocks.push_back({offset, static_cast<std::uint32_t>(block.count()), block.min_pmz, block.max_pmz});
      index.blocks.push_back(std::move(block));
    }
    index.manifest.partitions.push_back(std::move(part));
  }
  return index;
}

std::vector<BlockKey> select_blocks(const IndexManifest& manifest, int charge, double lo, double hi) {
  std::vector<BlockKey> keys;
  const auto* part = manifest.partition(charge);
  if (part == nullptr || lo > hi) return keys;
  const auto& blocks = part->blocks;
  // max_pmz is non-decreasing across the blocks of a partition.
  auto it = std::lower_bound(blocks.begin(), blocks.end(), lo,
                             [](const BlockMeta& m, double v) { return m.max_pmz < v; });
  for (; it != blocks.end() && it->min_pmz <= hi; ++it) {
    keys.push_back({charge, static_cast<std::uint32_t>(it - blocks.begin())});
  }
  return keys;
}

IndexReader::IndexReader(const std::string& path) : path_(path), file_(path, std::ios::binary) {
  if (!file_) throw IoError("cannot open " + path);
  Header h = read_header(file_);
  manifest_ = std::move(h.manifest);
  item_memory_ = std::move(h.item_memory);
  const std::size_t words = item_memory_.word_count();
  const auto parts = detail::get<std::uint32_t>(file_);
  for (std::uint32_t p = 0; p < parts; ++p) {
    ChargePartition part;
    part.charge = detail::get<std::uint8_t>(file_);
    const auto blocks = detail::get<std::uint32_t>(file_);
    for (std::uint32_t b = 0; b < blocks; ++b) {
      BlockMeta meta;
      meta.offset = static_cast<std::uint64_t>(file_.tellg());
      meta.count = detail::get<std::uint32_t>(file_);
      if (meta.count == 0 || meta.count > manifest_.max_r) {
        throw IncompatibleError("corrupt block: count " + std::to_string(meta.count));
      }
      meta.min_pmz = detail::get<double>(file_);
      meta.max_pmz = detail::get<double>(file_);
      file_.seekg(static_cast<std::streamoff>(meta.count) * (sizeof(double) + sizeof(std::uint32_t) + 1),
                  std::ios::cur);
      for (std::uint32_t t = 0; t < meta.count; ++t) {
        const auto len = detail::get<std::uint32_t>(file_);
        file_.seekg(len, std::ios::cur);
      }
      file_.seekg(static_cast<std::streamoff>(meta.count * words * sizeof(Word)), std::ios::cur);
      if (!file_) throw IoError("truncated index file " + path);
      part.blocks.push_back(meta);
    }
    manifest_.partitions.push_back(std::move(part));
  }
  // Seeking past the end does not fail an ifstream, so compare sizes.
  const auto expected = static_cast<std::uint64_t>(file_.tellg());
  file_.seekg(0, std::ios::end);
  const auto size = static_cast<std::uint64_t>(file_.tellg());
  if (expected != size) {
    throw IoError("index file " + path + " is " + std::to_string(size) + " bytes, manifest describes " +
                  std::to_string(expected));
  }
}

std::shared_ptr<const Block> IndexReader::read_block(const BlockKey& key) const {
  const BlockMeta& meta = manifest_.meta(key);
  std::lock_guard lock(mutex_);
  file_.clear();
  file_.seekg(static_cast<std::streamoff>(meta.offset));
  try {
    auto block = std::make_shared<Block>(read_block_body(file_, key.charge, item_memory_.word_count(), manifest_.max_r));
    return block;
  } catch (const IoError& e) {
    throw IoError("block (charge " + std::to_string(key.charge) + ", #" + std::to_string(key.index) +
                  ") of " + path_ + ": " + e.what());
  }
}

}  // namespace hdoms
