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

#include "hdoms/item_memory.hpp"

#include <numeric>

#include "binary_io.hpp"
#include "hdoms/errors.hpp"

namespace hdoms {

std::uint64_t SplitMix64::mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix(state_);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  __extension__ using u128 = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
}

SplitMix64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  const std::uint64_t tagged = SplitMix64::mix(seed ^ (static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL));
  return SplitMix64(SplitMix64::mix(tagged ^ SplitMix64::mix(index + 0x632BE59BD9B4E019ULL)));
}

namespace {

void fill_random(std::span<Word> words, SplitMix64 rng) {
  for (auto& w : words) w = rng.next();
}

}  // namespace

std::uint32_t ItemMemory::level_step(std::uint32_t levels, std::uint32_t dim) {
  if (levels < 2) return 0;
  return 2 * (dim / (4 * (levels - 1)));
}

ItemMemory ItemMemory::generate(std::uint32_t bins, std::uint32_t levels, std::uint32_t dim,
                                std::uint64_t seed) {
  check_dim(dim);
  if (bins == 0 || levels == 0) throw ConfigError("item memory needs at least one bin and one level");
  if (levels >= 2 && level_step(levels, dim) == 0) {
    throw ConfigError("dim " + std::to_string(dim) + " too small for " + std::to_string(levels) +
                      " levels (need dim >= 4 * (levels - 1))");
  }

  ItemMemory im;
  im.bins_ = bins;
  im.levels_ = levels;
  im.dim_ = dim;
  im.seed_ = seed;
  im.generator_ = kGeneratorName;
  const std::size_t w = im.word_count();

  im.id_words_.resize(static_cast<std::size_t>(bins) * w);
  for (std::uint32_t b = 0; b < bins; ++b) {
    fill_random({im.id_words_.data() + b * w, w}, make_stream(seed, StreamTag::kId, b));
  }

  im.level_words_.resize(static_cast<std::size_t>(levels) * w);
  fill_random({im.level_words_.data(), w}, make_stream(seed, StreamTag::kLevel, 0));
  if (levels >= 2) {
    // Partial Fisher-Yates: the first step * (levels - 1) positions of a
    // random permutation are flipped in consecutive chunks, so no position is
    // ever flipped twice.
    const std::uint32_t step = level_step(levels, dim);
    const std::size_t total = static_cast<std::size_t>(step) * (levels - 1);
    std::vector<std::uint32_t> order(dim);
    std::iota(order.begin(), order.end(), 0U);
    auto rng = make_stream(seed, StreamTag::kLevelFlips, 0);
    for (std::size_t i = 0; i < total; ++i) {
      const auto j = i + rng.below(dim - i);
      std::swap(order[i], order[j]);
    }
    for (std::uint32_t l = 1; l < levels; ++l) {
      Word* cur = im.level_words_.data() + static_cast<std::size_t>(l) * w;
      const Word* prev = cur - w;
      std::copy(prev, prev + w, cur);
      for (std::size_t k = 0; k < step; ++k) {
        const auto pos = order[static_cast<std::size_t>(l - 1) * step + k];
        cur[pos / kWordBits] ^= Word{1} << (pos % kWordBits);
      }
    }
  }

  im.tiebreak_.resize(w);
  fill_random(im.tiebreak_, make_stream(seed, StreamTag::kTiebreak, 0));
  return im;
}

void ItemMemory::serialize(std::ostream& out) const {
  detail::put<std::uint32_t>(out, bins_);
  detail::put<std::uint32_t>(out, levels_);
  detail::put<std::uint32_t>(out, dim_);
  detail::put<std::uint64_t>(out, seed_);
  detail::put_string(out, generator_);
  detail::put_array<Word>(out, id_words_);
  detail::put_array<Word>(out, level_words_);
  detail::put_array<Word>(out, tiebreak_);
}

ItemMemory ItemMemory::deserialize(std::istream& in) {
  ItemMemory im;
  im.bins_ = detail::get<std::uint32_t>(in);
  im.levels_ = detail::get<std::uint32_t>(in);
  im.dim_ = detail::get<std::uint32_t>(in);
  im.seed_ = detail::get<std::uint64_t>(in);
  im.generator_ = detail::get_string(in, 4096);
  check_dim(im.dim_);
  if (im.bins_ == 0 || im.levels_ == 0) throw IncompatibleError("item memory with zero bins or levels");
  const std::size_t w = im.word_count();
  im.id_words_.resize(static_cast<std::size_t>(im.bins_) * w);
  im.level_words_.resize(static_cast<std::size_t>(im.levels_) * w);
  im.tiebreak_.resize(w);
  detail::get_array<Word>(in, im.id_words_);
  detail::get_array<Word>(in, im.level_words_);
  detail::get_array<Word>(in, im.tiebreak_);
  return im;
}

}  // namespace hdoms
