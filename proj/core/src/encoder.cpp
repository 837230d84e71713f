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

#include "hdoms/encoder.hpp"

#include <bit>
#include <string>

#include "hdoms/errors.hpp"

namespace hdoms {

Hypervector encode_spectrum(const QuantizedSpectrum& qs, const ItemMemory& im) {
  Hypervector out(im.dim());
  const std::size_t n = qs.entries.size();
  if (n == 0) return out;

  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = qs.entries[k];
    if (e.bin >= im.bin_count() || e.level >= im.level_count()) {
      throw EncodingError("entry " + std::to_string(k) + " (bin " + std::to_string(e.bin) + ", level " +
                          std::to_string(e.level) + ") outside item memory of " +
                          std::to_string(im.bin_count()) + " bins x " + std::to_string(im.level_count()) +
                          " levels");
    }
  }

  // Vertical counters: plane p of word w holds bit p of the per-bit vote count.
  const std::size_t words = im.word_count();
  const std::size_t planes = static_cast<std::size_t>(std::bit_width(n));
  std::vector<Word> counter(words * planes, 0);
  for (const auto& e : qs.entries) {
    const Word* id = im.id(e.bin).data();
    const Word* lv = im.level(e.level).data();
    for (std::size_t w = 0; w < words; ++w) {
      Word carry = id[w] ^ lv[w];
      Word* c = counter.data() + w * planes;
      for (std::size_t p = 0; carry != 0 && p < planes; ++p) {
        const Word next = c[p] & carry;
        c[p] ^= carry;
        carry = next;
      }
    }
  }

  // Compare every count against half = floor(n / 2), most significant plane first.
  const std::size_t half = n / 2;
  const bool even = (n % 2) == 0;
  const Word* tie = im.tiebreak().data();
  auto dst = out.mutable_words();
  for (std::size_t w = 0; w < words; ++w) {
    const Word* c = counter.data() + w * planes;
    Word gt = 0;
    Word eq = ~Word{0};
    for (std::size_t p = planes; p-- > 0;) {
      const Word t = ((half >> p) & 1U) ? ~Word{0} : Word{0};
      gt |= eq & c[p] & ~t;
      eq &= ~(c[p] ^ t);
    }
    dst[w] = even ? (gt | (eq & tie[w])) : gt;
  }
  return out;
}

}  // namespace hdoms
