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

#include <vector>

#include "hdoms/hypervector.hpp"
#include "hdoms/item_memory.hpp"
#include "hdoms/preprocess.hpp"

namespace hdoms {

// ID-level encoding: each entry binds ID[bin] XOR L[level]; the bound vectors
// are bundled by per-bit majority. Exact ties (even entry counts) take the
// item memory's tiebreak bit. No entries gives the all-zero vector.
// Throws EncodingError naming the entry when a bin or level is out of range.
Hypervector encode_spectrum(const QuantizedSpectrum& qs, const ItemMemory& im);

}  // namespace hdoms
