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
#include <utility>
#include <vector>

#include "hdoms/spectrum.hpp"

namespace hdoms {

enum class IntensityTransform : std::uint8_t { kLinear, kSqrt };

struct PreprocessConfig {
  double rel_intensity_floor = 0.01;  // fraction of the base peak
  double bin_size = 0.05;             // Thomson
  double mz_min = 50.0;
  double mz_max = 2500.0;
  int num_levels = 64;
  IntensityTransform intensity_transform = IntensityTransform::kSqrt;
  bool drop_level_zero = false;

  // Throws ConfigError when an invariant does not hold.
  void validate() const;

  // ceil((mz_max - mz_min) / bin_size)
  std::uint32_t bin_count() const;

  // Canonical key=value text, stored in index files.
  std::string to_text() const;
  static PreprocessConfig from_text(const std::string& body);

  friend bool operator==(const PreprocessConfig&, const PreprocessConfig&) = default;
};

struct QuantizedEntry {
  std::uint32_t bin = 0;
  std::uint16_t level = 0;

  friend bool operator==(const QuantizedEntry&, const QuantizedEntry&) = default;
};

struct QuantizedSpectrum {
  std::uint32_t source_id = 0;
  double precursor_mz = 0.0;
  int charge = 0;
  std::vector<QuantizedEntry> entries;  // bins strictly ascending

  friend bool operator==(const QuantizedSpectrum&, const QuantizedSpectrum&) = default;
};

using BinnedPeaks = std::vector<std::pair<std::uint32_t, double>>;

// Drops peaks below rel_intensity_floor * base peak and outside [mz_min, mz_max).
Spectrum filter_peaks(const Spectrum& spectrum, const PreprocessConfig& cfg);

// bin = floor((mz - mz_min) / bin_size); same-bin intensities are summed.
BinnedPeaks bin_peaks(const Spectrum& spectrum, const PreprocessConfig& cfg);

// Transform, normalize to the maximum and map to levels 0..q-1
// (round half to even).
QuantizedSpectrum quantize(const BinnedPeaks& binned, const PreprocessConfig& cfg);

// filter_peaks -> bin_peaks -> quantize, with spectrum metadata carried over.
QuantizedSpectrum preprocess(const Spectrum& spectrum, const PreprocessConfig& cfg);

}  // namespace hdoms
