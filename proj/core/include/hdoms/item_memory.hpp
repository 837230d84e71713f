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
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hdoms/hypervector.hpp"

namespace hdoms {

// SplitMix64 (Steele, Lea, Flood 2014). Item memories are derived from it
// with one independent stream per (seed, tag, index) triple.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() noexcept;
  // Uniform integer in [0, bound), bound > 0 (multiply-shift reduction).
  std::uint64_t below(std::uint64_t bound) noexcept;
  static std::uint64_t mix(std::uint64_t z) noexcept;

 private:
  std::uint64_t state_;
};

enum class StreamTag : std::uint64_t { kId = 1, kLevel = 2, kTiebreak = 3, kLevelFlips = 4 };

SplitMix64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index);

// ID (per m/z bin) and Level (per intensity level) codebooks plus the
// tie-break vector used by the majority bundle. Immutable once built.
class ItemMemory {
 public:
  static constexpr const char* kGeneratorName = "splitmix64";

  ItemMemory() = default;

  // Throws ConfigError on a bad dim, zero counts, or when the level gradient
  // would need zero flips per step (dim < 4 * (levels - 1)).
  static ItemMemory generate(std::uint32_t bins, std::uint32_t levels, std::uint32_t dim,
                             std::uint64_t seed);

  // Bits flipped between consecutive level vectors: 2 * floor(dim / (4 (q - 1))).
  static std::uint32_t level_step(std::uint32_t levels, std::uint32_t dim);

  std::uint32_t bin_count() const noexcept { return bins_; }
  std::uint32_t level_count() const noexcept { return levels_; }
  std::uint32_t dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& generator() const noexcept { return generator_; }
  std::size_t word_count() const noexcept { return dim_ / kWordBits; }

  HvView id(std::uint32_t bin) const noexcept {
    return {id_words_.data() + static_cast<std::size_t>(bin) * word_count(), word_count()};
  }
  HvView level(std::uint32_t lvl) const noexcept {
    return {level_words_.data() + static_cast<std::size_t>(lvl) * word_count(), word_count()};
  }
  HvView tiebreak() const noexcept { return tiebreak_; }

  // Header (bins, levels, dim as u32, seed as u64, generator name as
  // u32-length-prefixed UTF-8), then the ID, Level and tiebreak words, all
  // little-endian.
  void serialize(std::ostream& out) const;
  static ItemMemory deserialize(std::istream& in);

  friend bool operator==(const ItemMemory&, const ItemMemory&) = default;

 private:
  std::uint32_t bins_ = 0;
  std::uint32_t levels_ = 0;
  std::uint32_t dim_ = 0;
  std::uint64_t seed_ = 0;
  std::string generator_;
  std::vector<Word> id_words_;
  std::vector<Word> level_words_;
  std::vector<Word> tiebreak_;
};

}  // namespace hdoms
