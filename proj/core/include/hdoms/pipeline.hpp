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
#include <vector>

#include "hdoms/item_memory.hpp"
#include "hdoms/library_index.hpp"
#include "hdoms/preprocess.hpp"
#include "hdoms/search.hpp"
#include "hdoms/spectrum.hpp"

// Glue between parsing, preprocessing, encoding and indexing.
namespace hdoms {

inline constexpr std::uint32_t kDefaultDim = 4096;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Item memory sized to the preprocess geometry (bin count, level count).
ItemMemory make_item_memory(const PreprocessConfig& cfg, std::uint32_t dim, std::uint64_t seed);

// Preprocess and encode in parallel; output order follows the input.
std::vector<RefRecord> encode_library(const std::vector<Spectrum>& spectra, const PreprocessConfig& cfg,
                                      const ItemMemory& im, unsigned workers = 1);
std::vector<EncodedQuery> encode_queries(const std::vector<Spectrum>& spectra, const PreprocessConfig& cfg,
                                         const ItemMemory& im, unsigned workers = 1);

}  // namespace hdoms
