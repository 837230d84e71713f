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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hdoms {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

using HvView = std::span<const Word>;

// Binary hypervector of dim bits packed into 64-bit words. Bit i lives in
// bit (i % 64) of word (i / 64); dim is always a multiple of 64.
class Hypervector {
 public:
  Hypervector() = default;
  explicit Hypervector(std::size_t dim);
  Hypervector(std::size_t dim, std::vector<Word> words);

  std::size_t dim() const noexcept { return words_.size() * kWordBits; }
  std::size_t word_count() const noexcept { return words_.size(); }

  HvView view() const noexcept { return words_; }
  std::span<Word> mutable_words() noexcept { return words_; }
  const std::vector<Word>& words() const noexcept { return words_; }

  bool bit(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set_bit(std::size_t i, bool value) noexcept {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  std::vector<Word> words_;
};

// Throws ConfigError unless dim is a positive multiple of 64.
void check_dim(std::size_t dim);

// popcount(a XOR b) over equal-length word spans; no length check.
inline std::uint32_t hamming_unchecked(const Word* a, const Word* b, std::size_t words) noexcept {
  std::uint32_t acc0 = 0;
  std::uint32_t acc1 = 0;
  std::uint32_t acc2 = 0;
  std::uint32_t acc3 = 0;
  const std::size_t body = words - words % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    acc0 += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
    acc1 += static_cast<std::uint32_t>(std::popcount(a[i + 1] ^ b[i + 1]));
    acc2 += static_cast<std::uint32_t>(std::popcount(a[i + 2] ^ b[i + 2]));
    acc3 += static_cast<std::uint32_t>(std::popcount(a[i + 3] ^ b[i + 3]));
  }
  for (std::size_t i = body; i < words; ++i) acc0 += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
  return acc0 + acc1 + acc2 + acc3;
}

// Number of differing bits. Throws IncompatibleError on a dimension mismatch.
std::uint32_t hamming(HvView a, HvView b);
std::uint32_t hamming(const Hypervector& a, const Hypervector& b);

// dim - hamming(a, b): identical vectors score dim, complements score 0.
std::int32_t similarity_score(HvView a, HvView b);
std::int32_t similarity_score(const Hypervector& a, const Hypervector& b);

}  // namespace hdoms
