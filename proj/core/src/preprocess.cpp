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

#include "hdoms/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hdoms/errors.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms {

void PreprocessConfig::validate() const {
  if (!(rel_intensity_floor >= 0.0 && rel_intensity_floor < 1.0)) {
    throw ConfigError("rel_intensity_floor must be in [0, 1)");
  }
  if (!(bin_size > 0.0)) throw ConfigError("bin_size must be > 0");
  if (!(mz_min < mz_max)) throw ConfigError("mz_min must be < mz_max");
  if (num_levels < 2 || num_levels > 65535) throw ConfigError("levels must be in [2, 65535]");
  const double bins = std::ceil((mz_max - mz_min) / bin_size);
  if (!(bins >= 1.0 && bins <= 1e9)) throw ConfigError("bin count out of range");
}

std::uint32_t PreprocessConfig::bin_count() const {
  return static_cast<std::uint32_t>(std::ceil((mz_max - mz_min) / bin_size));
}

std::string PreprocessConfig::to_text() const {
  std::ostringstream out;
  out << "bin_size=" << text::format_double(bin_size) << '\n'
      << "mz_min=" << text::format_double(mz_min) << '\n'
      << "mz_max=" << text::format_double(mz_max) << '\n'
      << "levels=" << num_levels << '\n'
      << "rel_intensity_floor=" << text::format_double(rel_intensity_floor) << '\n'
      << "intensity_transform=" << (intensity_transform == IntensityTransform::kSqrt ? "sqrt" : "linear")
      << '\n'
      << "drop_level_zero=" << (drop_level_zero ? "true" : "false") << '\n';
  return out.str();
}

PreprocessConfig PreprocessConfig::from_text(const std::string& body) {
  PreprocessConfig cfg;
  const auto need_double = [](const std::string& k, const std::string& v) {
    const auto d = text::parse_double(v);
    if (!d) throw ConfigError("bad value for " + k + ": " + v);
    return *d;
  };
  for (const auto& [k, v] : text::parse_key_values(body)) {
    if (k == "bin_size") {
      cfg.bin_size = need_double(k, v);
    } else if (k == "mz_min") {
      cfg.mz_min = need_double(k, v);
    } else if (k == "mz_max") {
      cfg.mz_max = need_double(k, v);
    } else if (k == "levels") {
      const auto n = text::parse_int(v);
      if (!n) throw ConfigError("bad value for levels: " + v);
      cfg.num_levels = static_cast<int>(*n);
    } else if (k == "rel_intensity_floor") {
      cfg.rel_intensity_floor = need_double(k, v);
    } else if (k == "intensity_transform") {
      if (v == "sqrt") {
        cfg.intensity_transform = IntensityTransform::kSqrt;
      } else if (v == "linear") {
        cfg.intensity_transform = IntensityTransform::kLinear;
      } else {
        throw ConfigError("bad intensity_transform: " + v);
      }
    } else if (k == "drop_level_zero") {
      const auto b = text::parse_bool(v);
      if (!b) throw ConfigError("bad value for drop_level_zero: " + v);
      cfg.drop_level_zero = *b;
    } else {
      throw ConfigError("unknown preprocess key: " + k);
    }
  }
  cfg.validate();
  return cfg;
}

Spectrum filter_peaks(const Spectrum& spectrum, const PreprocessConfig& cfg) {
  Spectrum out = spectrum;
  out.peaks.clear();
  if (spectrum.peaks.empty()) return out;
  const auto in_range = [&](const Peak& p) { return p.mz >= cfg.mz_min && p.mz < cfg.mz_max; };
  // Base peak is taken over the retained m/z range.
  double base = 0.0;
  for (const auto& p : spectrum.peaks) {
    if (in_range(p)) base = std::max(base, p.intensity);
  }
  const double floor = cfg.rel_intensity_floor * base;
  for (const auto& p : spectrum.peaks) {
    if (in_range(p) && p.intensity >= floor) out.peaks.push_back(p);
  }
  return out;
}

BinnedPeaks bin_peaks(const Spectrum& spectrum, const PreprocessConfig& cfg) {
  const std::uint32_t last_bin = cfg.bin_count() - 1;
  BinnedPeaks binned;
  binned.reserve(spectrum.peaks.size());
  for (const auto& p : spectrum.peaks) {
    if (p.mz < cfg.mz_min || p.mz >= cfg.mz_max) continue;
    // Clamp guards the last bin against rounding in the division.
    const auto bin = std::min(
        static_cast<std::uint32_t>(std::floor((p.mz - cfg.mz_min) / cfg.bin_size)), last_bin);
    binned.emplace_back(bin, p.intensity);
  }
  std::stable_sort(binned.begin(), binned.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < binned.size(); ++i) {
    if (out > 0 && binned[out - 1].first == binned[i].first) {
      binned[out - 1].second += binned[i].second;
    } else {
      binned[out++] = binned[i];
    }
  }
  binned.resize(out);
  return binned;
}

QuantizedSpectrum quantize(const BinnedPeaks& binned, const PreprocessConfig& cfg) {
  QuantizedSpectrum qs;
  if (binned.empty()) return qs;
  const auto transform = [&](double v) {
    return cfg.intensity_transform == IntensityTransform::kSqrt ? std::sqrt(v) : v;
  };
  double max_value = 0.0;
  for (const auto& [bin, intensity] : binned) max_value = std::max(max_value, transform(intensity));
  const double top = static_cast<double>(cfg.num_levels - 1);
  qs.entries.reserve(binned.size());
  for (const auto& [bin, intensity] : binned) {
    // An all-zero spectrum has no scale; every peak is then its own base peak.
    const double norm = max_value > 0.0 ? transform(intensity) / max_value : 1.0;
    const auto level = static_cast<std::uint16_t>(std::clamp(std::nearbyint(norm * top), 0.0, top));
    if (level == 0 && cfg.drop_level_zero) continue;
    qs.entries.push_back({bin, level});
  }
  return qs;
}

QuantizedSpectrum preprocess(const Spectrum& spectrum, const PreprocessConfig& cfg) {
  QuantizedSpectrum qs = quantize(bin_peaks(filter_peaks(spectrum, cfg), cfg), cfg);
  qs.source_id = spectrum.id;
  qs.precursor_mz = spectrum.precursor_mz;
  qs.charge = spectrum.charge;
  return qs;
}

}  // namespace hdoms
