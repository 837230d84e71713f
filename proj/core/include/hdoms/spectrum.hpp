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
#include <string>
#include <vector>

namespace hdoms {

struct Peak {
  double mz = 0.0;
  double intensity = 0.0;

  friend bool operator==(const Peak&, const Peak&) = default;
};

// One MS/MS spectrum. Peaks are kept sorted by m/z without duplicates.
struct Spectrum {
  std::uint32_t id = 0;
  std::string title;
  double precursor_mz = 0.0;
  int charge = 0;
  std::vector<Peak> peaks;
  bool is_decoy = false;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

inline constexpr int kMaxCharge = 8;
inline constexpr const char* kDefaultDecoyPrefix = "DECOY_";

// Sorts peaks by m/z and merges exact m/z duplicates by summing intensity.
void normalize_peaks(std::vector<Peak>& peaks);

}  // namespace hdoms
