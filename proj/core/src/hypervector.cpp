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

#include "hdoms/hypervector.hpp"

#include <string>

#include "hdoms/errors.hpp"

namespace hdoms {

Hypervector::Hypervector(std::size_t dim) {
  check_dim(dim);
  words_.assign(dim / kWordBits, 0);
}

Hypervector::Hypervector(std::size_t dim, std::vector<Word> words) : words_(std::move(words)) {
  check_dim(dim);
  if (words_.size() != dim / kWordBits) {
    throw IncompatibleError("hypervector of dim " + std::to_string(dim) + " given " +
                            std::to_string(words_.size()) + " words");
  }
}

void check_dim(std::size_t dim) {
  if (dim == 0 || dim % kWordBits != 0) {
    throw ConfigError("hypervector dimension must be a positive multiple of 64, got " +
                      std::to_string(dim));
  }
}

std::uint32_t hamming(HvView a, HvView b) {
  if (a.size() != b.size()) {
    throw IncompatibleError("hamming: dimension mismatch " + std::to_string(a.size() * kWordBits) +
                            " vs " + std::to_string(b.size() * kWordBits));
  }
  return hamming_unchecked(a.data(), b.data(), a.size());
}

std::uint32_t hamming(const Hypervector& a, const Hypervector& b) { return hamming(a.view(), b.view()); }

std::int32_t similarity_score(HvView a, HvView b) {
  const auto d = hamming(a, b);
  return static_cast<std::int32_t>(a.size() * kWordBits) - static_cast<std::int32_t>(d);
}

std::int32_t similarity_score(const Hypervector& a, const Hypervector& b) {
  return similarity_score(a.view(), b.view());
}

}  // namespace hdoms
