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

#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <sstream>

#include "hdoms/encoder.hpp"
#include "hdoms/errors.hpp"
#include "hdoms/hypervector.hpp"
#include "hdoms/item_memory.hpp"
#include "test_util.hpp"

namespace hdoms {
namespace {

using testing::bitloop_hamming;
using testing::random_hv;

TEST(Hypervector, Layout) {
  Hypervector hv(128);
  EXPECT_EQ(hv.word_count(), 2U);
  hv.set_bit(65, true);
  EXPECT_EQ(hv.words()[1], Word{2});
  EXPECT_TRUE(hv.bit(65));
  EXPECT_THROW(Hypervector(100), ConfigError);
  EXPECT_THROW(Hypervector(0), ConfigError);
}

TEST(Hamming, IdentityAndComplement) {
  std::mt19937_64 rng(1);
  const Hypervector a = random_hv(4096, rng);
  EXPECT_EQ(hamming(a, a), 0U);
  std::vector<Word> inv = a.words();
  for (auto& w : inv) w = ~w;
  const Hypervector b(4096, inv);
  EXPECT_EQ(hamming(a, b), 4096U);
  EXPECT_EQ(similarity_score(a, a), 4096);
  EXPECT_EQ(similarity_score(a, b), 0);
}

TEST(Hamming, MatchesBitLoopOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_hv(4096, rng);
    const auto b = random_hv(4096, rng);
    const auto oracle = bitloop_hamming(a.view(), b.view());
    ASSERT_EQ(hamming(a, b), oracle);
    ASSERT_EQ(similarity_score(a, b), 4096 - static_cast<std::int32_t>(oracle));
  }
}

TEST(Hamming, OddWordCounts) {
  std::mt19937_64 rng(3);
  for (std::size_t dim : {64, 192, 320, 4160}) {
    const auto a = random_hv(dim, rng);
    const auto b = random_hv(dim, rng);
    EXPECT_EQ(hamming(a, b), bitloop_hamming(a.view(), b.view()));
  }
}

TEST(Hamming, MetricAxioms) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_hv(1024, rng);
    const auto b = random_hv(1024, rng);
    const auto c = random_hv(1024, rng);
    EXPECT_EQ(hamming(a, b), hamming(b, a));
    EXPECT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
    Hypervector a2 = a;
    a2.set_bit(static_cast<std::size_t>(i), !a2.bit(static_cast<std::size_t>(i)));
    EXPECT_EQ(hamming(a2, a), 1U);
    EXPECT_EQ(hamming(a, Hypervector(a)), 0U);
  }
}

TEST(Hamming, DimensionMismatch) {
  EXPECT_THROW(hamming(Hypervector(64), Hypervector(128)), IncompatibleError);
  EXPECT_THROW(similarity_score(Hypervector(64), Hypervector(128)), IncompatibleError);
}

TEST(ItemMemory, Deterministic) {
  const auto a = ItemMemory::generate(1, 2, 64, 7);
  const auto b = ItemMemory::generate(1, 2, 64, 7);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, ItemMemory::generate(1, 2, 64, 8));
  EXPECT_EQ(a.generator(), "splitmix64");
}

TEST(ItemMemory, TwoLevelsAreHalfApart) {
  const auto im = ItemMemory::generate(4, 2, 4096, 11);
  EXPECT_EQ(hamming(im.level(0), im.level(1)), 2048U);
}

TEST(ItemMemory, LevelGradient) {
  for (std::uint32_t q : {4U, 16U, 64U}) {
    const auto im = ItemMemory::generate(2, q, 4096, 12);
    const std::uint32_t s = 2 * (4096 / (4 * (q - 1)));
    EXPECT_EQ(ItemMemory::level_step(q, 4096), s);
    EXPECT_EQ(hamming(im.level(0), im.level(q - 1)), s * (q - 1));
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = a; b < q; ++b) {
        // Disjoint flips make the distance exact.
        ASSERT_EQ(hamming(im.level(a), im.level(b)), s * (b - a));
      }
    }
  }
}

TEST(ItemMemory, IdVectorsQuasiOrthogonal) {
  const auto im = ItemMemory::generate(1000, 64, 4096, 99);
  std::mt19937_64 rng(5);
  double total = 0;
  const double bound = 4.0 * std::sqrt(4096.0);
  for (int i = 0; i < 200; ++i) {
    const auto a = static_cast<std::uint32_t>(rng() % 1000);
    auto b = static_cast<std::uint32_t>(rng() % 1000);
    if (b == a) b = (a + 1) % 1000;
    const double d = hamming(im.id(a), im.id(b));
    EXPECT_LE(std::abs(d - 2048.0), bound);
    total += d;
  }
  EXPECT_NEAR(total / 200.0, 2048.0, 64.0);
}

TEST(ItemMemory, RejectsTooFewBits) {
  EXPECT_THROW(ItemMemory::generate(10, 64, 128, 1), ConfigError);
  EXPECT_THROW(ItemMemory::generate(10, 64, 100, 1), ConfigError);
  EXPECT_THROW(ItemMemory::generate(0, 64, 4096, 1), ConfigError);
}

TEST(ItemMemory, SerializeRoundTrip) {
  const auto im = ItemMemory::generate(300, 8, 256, 3);
  std::stringstream buf;
  im.serialize(buf);
  EXPECT_EQ(ItemMemory::deserialize(buf), im);
}

QuantizedSpectrum entries(std::vector<QuantizedEntry> e) {
  QuantizedSpectrum qs;
  qs.entries = std::move(e);
  return qs;
}

// Per-bit majority over unpacked bound vectors.
Hypervector oracle_encode(const QuantizedSpectrum& qs, const ItemMemory& im) {
  const std::size_t dim = im.dim();
  Hypervector out(dim);
  const std::size_t n = qs.entries.size();
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t ones = 0;
    for (const auto& e : qs.entries) {
      const bool id_bit = (im.id(e.bin)[i / 64] >> (i % 64)) & 1U;
      const bool lv_bit = (im.level(e.level)[i / 64] >> (i % 64)) & 1U;
      ones += id_bit != lv_bit ? 1 : 0;
    }
    bool bit = false;
    if (2 * ones > n) {
      bit = true;
    } else if (2 * ones == n && n > 0) {
      bit = (im.tiebreak()[i / 64] >> (i % 64)) & 1U;
    }
    out.set_bit(i, bit);
  }
  return out;
}

TEST(Encode, SingleEntryIsBoundPair) {
  const auto im = ItemMemory::generate(50, 8, 512, 1);
  const auto hv = encode_spectrum(entries({{17, 5}}), im);
  for (std::size_t w = 0; w < hv.word_count(); ++w) {
    EXPECT_EQ(hv.words()[w], im.id(17)[w] ^ im.level(5)[w]);
  }
}

TEST(Encode, EmptyIsZero) {
  const auto im = ItemMemory::generate(5, 4, 64, 1);
  EXPECT_EQ(encode_spectrum(entries({}), im), Hypervector(64));
}

TEST(Encode, ToyMajority) {
  // Three bound vectors [1,0,1,0], [1,1,0,0], [1,0,0,1] in the low bits of a
  // 64-bit word; the level vectors are left as they are and the ID rows are
  // chosen so that ID ^ L equals each target.
  auto im = ItemMemory::generate(3, 2, 64, 5);
  std::stringstream buf;
  im.serialize(buf);
  std::string bytes = buf.str();
  const Word targets[3] = {0b0101, 0b0011, 0b1001};
  const Word l0 = im.level(0)[0];
  // ID words start after the fixed header: 3*u32 + u64 + u32 + name.
  const std::size_t id_offset = 12 + 8 + 4 + std::string(ItemMemory::kGeneratorName).size();
  for (int k = 0; k < 3; ++k) {
    const Word id = targets[k] ^ l0;
    std::memcpy(bytes.data() + id_offset + 8 * k, &id, 8);
  }
  std::stringstream in(bytes);
  im = ItemMemory::deserialize(in);
  const auto hv = encode_spectrum(entries({{0, 0}, {1, 0}, {2, 0}}), im);
  EXPECT_EQ(hv.words()[0] & 0xF, Word{0b0001});
}

TEST(Encode, MatchesBitLoopOracle) {
  const auto im = ItemMemory::generate(2000, 64, 4096, 77);
  std::mt19937_64 rng(6);
  for (std::size_t n : {1, 2, 24, 25, 64, 100}) {
    std::set<std::uint32_t> bins;
    while (bins.size() < n) bins.insert(static_cast<std::uint32_t>(rng() % 2000));
    QuantizedSpectrum qs;
    for (auto b : bins) qs.entries.push_back({b, static_cast<std::uint16_t>(rng() % 64)});
    EXPECT_EQ(encode_spectrum(qs, im), oracle_encode(qs, im)) << "entries=" << n;
  }
}

TEST(Encode, OrderInvariant) {
  const auto im = ItemMemory::generate(500, 16, 1024, 8);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    QuantizedSpectrum qs;
    for (std::uint32_t b = 0; b < 30; ++b) qs.entries.push_back({b * 13, static_cast<std::uint16_t>(rng() % 16)});
    const auto base = encode_spectrum(qs, im);
    std::shuffle(qs.entries.begin(), qs.entries.end(), rng);
    EXPECT_EQ(encode_spectrum(qs, im), base);
  }
}

TEST(Encode, SimilarityPreserved) {
  const auto im = ItemMemory::generate(49000, 64, 4096, 42);
  std::mt19937_64 rng(8);
  int wins = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::set<std::uint32_t> used;
    auto draw = [&](std::size_t n) {
      QuantizedSpectrum qs;
      std::set<std::uint32_t> bins;
      while (bins.size() < n) {
        const auto b = static_cast<std::uint32_t>(rng() % 49000);
        if (!used.count(b)) bins.insert(b);
      }
      for (auto b : bins) {
        used.insert(b);
        qs.entries.push_back({b, static_cast<std::uint16_t>(1 + rng() % 62)});
      }
      return qs;
    };
    const QuantizedSpectrum s = draw(30);
    const QuantizedSpectrum other = draw(30);
    QuantizedSpectrum p = s;
    for (int k = 0; k < 3; ++k) {
      auto& e = p.entries[(trial + 10 * k) % 30];
      e.level = static_cast<std::uint16_t>(rng() % 2 ? e.level + 1 : e.level - 1);
    }
    const auto hs = encode_spectrum(s, im);
    if (hamming(hs, encode_spectrum(p, im)) < hamming(hs, encode_spectrum(other, im))) ++wins;
  }
  EXPECT_GE(wins, 99);
}

TEST(Encode, OutOfRangeNamesEntry) {
  const auto im = ItemMemory::generate(10, 4, 64, 1);
  try {
    encode_spectrum(entries({{1, 1}, {10, 0}}), im);
    FAIL();
  } catch (const EncodingError& e) {
    EXPECT_NE(std::string(e.what()).find("entry 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(encode_spectrum(entries({{1, 4}}), im), EncodingError);
}

}  // namespace
}  // namespace hdoms
