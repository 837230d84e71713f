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

#include "hdoms/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "hdoms/errors.hpp"
#include "hdoms/item_memory.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms {

void SynthConfig::validate() const {
  preprocess.validate();
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(perturb) || !unit(dropout) || !unit(decoy_fraction) || !unit(mass_shift_fraction)) {
    throw ConfigError("synth fractions must lie in [0, 1]");
  }
  if (!(pmz_min > 0.0 && pmz_min <= pmz_max)) throw ConfigError("synth precursor range is invalid");
  if (!(max_mass_shift >= 1.0)) throw ConfigError("max mass shift must be >= 1 Da");
  if (charges.empty()) throw ConfigError("synth needs at least one charge");
  for (int c : charges) {
    if (c < 1 || c > kMaxCharge) throw ConfigError("synth charge out of range: " + std::to_string(c));
  }
  if (peaks < 1) throw ConfigError("synth needs at least one peak per spectrum");
  const double lo = std::max(fragment_mz_min, preprocess.mz_min);
  const double hi = std::min(fragment_mz_max, preprocess.mz_max);
  if (!(lo < hi) || (hi - lo) / preprocess.bin_size < 2.0 * peaks) {
    throw ConfigError("fragment m/z range too narrow for the requested peak count");
  }
  if (decoy_prefix.empty()) throw ConfigError("decoy prefix must not be empty");
}

namespace {

enum class SynthStream : std::uint64_t { kLibrary = 101, kDecoys = 102, kShuffle = 103, kQueries = 104 };

SplitMix64 stream(const SynthConfig& cfg, SynthStream s, std::uint64_t index) {
  return make_stream(cfg.seed, static_cast<StreamTag>(s), index);
}

double uniform(SplitMix64& rng) { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; }

struct Geometry {
  std::uint32_t first_bin = 0;
  std::uint32_t bin_span = 0;
  int top = 0;        // q - 1
  int min_level = 0;  // lowest level safely above the noise floor
  double base_intensity = 10000.0;
  const PreprocessConfig* pp = nullptr;

  double mz_of(std::uint32_t bin) const { return pp->mz_min + (static_cast<double>(bin) + 0.5) * pp->bin_size; }
  double intensity_of(int level) const {
    const double norm = static_cast<double>(level) / top;
    return pp->intensity_transform == IntensityTransform::kSqrt ? base_intensity * norm * norm
                                                                 : base_intensity * norm;
  }
  // Inverse of intensity_of for values produced by it.
  int level_of(double intensity) const {
    const double norm = intensity / base_intensity;
    const double v = pp->intensity_transform == IntensityTransform::kSqrt ? std::sqrt(norm) : norm;
    return static_cast<int>(std::lround(v * top));
  }
};

Geometry make_geometry(const SynthConfig& cfg) {
  const auto& pp = cfg.preprocess;
  Geometry g;
  g.pp = &pp;
  const double lo = std::max(cfg.fragment_mz_min, pp.mz_min);
  const double hi = std::min(cfg.fragment_mz_max, pp.mz_max);
  g.first_bin = static_cast<std::uint32_t>(std::ceil((lo - pp.mz_min) / pp.bin_size));
  const auto last_bin = static_cast<std::uint32_t>(std::floor((hi - pp.mz_min) / pp.bin_size)) - 1;
  g.bin_span = last_bin - g.first_bin + 1;
  g.top = pp.num_levels - 1;
  const double floor_norm = pp.intensity_transform == IntensityTransform::kSqrt ? std::sqrt(pp.rel_intensity_floor)
                                                                                : pp.rel_intensity_floor;
  g.min_level = std::min(g.top, static_cast<int>(std::ceil(floor_norm * g.top)) + 1);
  return g;
}

std::vector<std::uint32_t> draw_bins(SplitMix64& rng, const Geometry& g, std::uint32_t n) {
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> bins;
  while (bins.size() < n) {
    const auto b = g.first_bin + static_cast<std::uint32_t>(rng.below(g.bin_span));
    if (seen.insert(b).second) bins.push_back(b);
  }
  return bins;
}

std::vector<Peak> make_peaks(const Geometry& g, const std::vector<std::uint32_t>& bins,
                             const std::vector<int>& levels) {
  std::vector<Peak> peaks;
  peaks.reserve(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) peaks.push_back({g.mz_of(bins[k]), g.intensity_of(levels[k])});
  normalize_peaks(peaks);
  return peaks;
}

// levels[0] is the base peak; the rest fall in [min_level, top - 1].
std::vector<int> draw_levels(SplitMix64& rng, const Geometry& g, std::uint32_t n) {
  std::vector<int> levels(n, g.top);
  if (g.top <= g.min_level) return levels;
  for (std::uint32_t k = 1; k < n; ++k) {
    levels[k] = g.min_level + static_cast<int>(rng.below(static_cast<std::uint64_t>(g.top - g.min_level)));
  }
  return levels;
}

std::string ordinal_title(const char* stem, std::uint32_t i) { return std::string(stem) + std::to_string(i); }

}  // namespace

SynthData synthesize(const SynthConfig& cfg) {
  cfg.validate();
  const Geometry g = make_geometry(cfg);
  const std::uint32_t n_decoys =
      static_cast<std::uint32_t>(std::llround(static_cast<double>(cfg.n_refs) * cfg.decoy_fraction));
  const std::uint32_t n_targets = cfg.n_refs - n_decoys;

  struct Draft {
    Spectrum s;
    std::vector<int> levels;  // parallel to s.peaks (sorted by m/z)
  };
  std::vector<Draft> drafts;
  drafts.reserve(cfg.n_refs);

  for (std::uint32_t i = 0; i < n_targets; ++i) {
    auto rng = stream(cfg, SynthStream::kLibrary, i);
    Draft d;
    d.s.charge = cfg.charges[rng.below(cfg.charges.size())];
    d.s.precursor_mz = cfg.pmz_min + uniform(rng) * (cfg.pmz_max - cfg.pmz_min);
    d.s.title = ordinal_title("REF_", i);
    const auto bins = draw_bins(rng, g, cfg.peaks);
    const auto levels = draw_levels(rng, g, cfg.peaks);
    d.s.peaks = make_peaks(g, bins, levels);
    drafts.push_back(std::move(d));
  }
  for (std::uint32_t i = 0; i < n_decoys; ++i) {
    // Decoy: a target's precursor and intensity profile over freshly drawn bins.
    auto rng = stream(cfg, SynthStream::kDecoys, i);
    if (n_targets == 0) {
      Draft d;
      d.s.charge = cfg.charges[rng.below(cfg.charges.size())];
      d.s.precursor_mz = cfg.pmz_min + uniform(rng) * (cfg.pmz_max - cfg.pmz_min);
      d.s.title = cfg.decoy_prefix + ordinal_title("REF_", i);
      d.s.is_decoy = true;
      const auto bins = draw_bins(rng, g, cfg.peaks);
      const auto levels = draw_levels(rng, g, cfg.peaks);
      d.s.peaks = make_peaks(g, bins, levels);
      drafts.push_back(std::move(d));
      continue;
    }
    const Spectrum& src = drafts[rng.below(n_targets)].s;
    Draft d;
    d.s.charge = src.charge;
    d.s.precursor_mz = src.precursor_mz;
    d.s.title = cfg.decoy_prefix + ordinal_title("REF_", n_targets + i);
    d.s.is_decoy = true;
    std::vector<int> levels;
    for (const auto& p : src.peaks) levels.push_back(g.level_of(p.intensity));
    const auto bins = draw_bins(rng, g, static_cast<std::uint32_t>(levels.size()));
    d.s.peaks = make_peaks(g, bins, levels);
    drafts.push_back(std::move(d));
  }

  // Interleave targets and decoys.
  std::vector<std::uint32_t> perm(drafts.size());
  std::iota(perm.begin(), perm.end(), 0U);
  auto shuffle_rng = stream(cfg, SynthStream::kShuffle, 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[shuffle_rng.below(i)]);

  SynthData out;
  out.library.reserve(drafts.size());
  std::vector<std::uint32_t> target_ids;
  for (std::uint32_t pos = 0; pos < perm.size(); ++pos) {
    Spectrum s = std::move(drafts[perm[pos]].s);
    s.id = pos;
    if (!s.is_decoy) target_ids.push_back(pos);
    out.library.push_back(std::move(s));
  }
  if (target_ids.empty() && cfg.n_queries > 0) throw ConfigError("queries need at least one target reference");

  auto qrng = stream(cfg, SynthStream::kQueries, 0);
  std::vector<std::uint32_t> sources;
  if (cfg.n_queries <= target_ids.size()) {
    std::vector<std::uint32_t> pool = target_ids;
    for (std::uint32_t k = 0; k < cfg.n_queries; ++k) {
      std::swap(pool[k], pool[k + qrng.below(pool.size() - k)]);
      sources.push_back(pool[k]);
    }
  } else {
    for (std::uint32_t k = 0; k < cfg.n_queries; ++k) sources.push_back(target_ids[qrng.below(target_ids.size())]);
  }

  for (std::uint32_t k = 0; k < cfg.n_queries; ++k) {
    auto rng = stream(cfg, SynthStream::kQueries, k + 1);
    const Spectrum& src = out.library[sources[k]];
    Spectrum q = src;
    q.id = k;
    q.title = ordinal_title("QUERY_", k);
    q.is_decoy = false;
    if (cfg.perturb > 0.0 || cfg.dropout > 0.0) {
      const double base = std::max_element(src.peaks.begin(), src.peaks.end(), [](const Peak& a, const Peak& b) {
                            return a.intensity < b.intensity;
                          })->intensity;
      std::vector<Peak> kept;
      bool base_done = false;
      for (const auto& p : src.peaks) {
        if (!base_done && p.intensity == base) {
          base_done = true;
          kept.push_back(p);
          continue;
        }
        if (uniform(rng) < cfg.dropout) continue;
        Peak np = p;
        if (uniform(rng) < cfg.perturb) {
          int lvl = g.level_of(p.intensity);
          const int up = (rng.next() & 1U) ? 1 : -1;
          int moved = lvl + up;
          if (moved < g.min_level || moved > g.top - 1) moved = lvl - up;
          if (moved >= g.min_level && moved <= g.top - 1) lvl = moved;
          np.intensity = g.intensity_of(lvl);
        }
        kept.push_back(np);
      }
      q.peaks = std::move(kept);
    }
    double shift = 0.0;
    if (cfg.mass_shift_fraction > 0.0 && uniform(rng) < cfg.mass_shift_fraction) {
      const double mag = 1.0 + uniform(rng) * (cfg.max_mass_shift - 1.0);
      shift = (rng.next() & 1U) ? mag : -mag;
      if (q.precursor_mz + shift <= 0.0) shift = mag;
      q.precursor_mz += shift;
    }
    out.truth.push_back({k, q.title, src.id, src.title, shift});
    out.queries.push_back(std::move(q));
  }
  return out;
}

void write_truth(std::ostream& out, const std::vector<SynthTruth>& truth) {
  out << "query_id\tquery_title\tref_id\tref_title\tmass_shift\n";
  for (const auto& t : truth) {
    out << t.query_id << '\t' << t.query_title << '\t' << t.ref_id << '\t' << t.ref_title << '\t'
        << text::format_double(t.mass_shift) << '\n';
  }
  if (!out) throw IoError("truth write failed");
}

std::vector<SynthTruth> read_truth(std::istream& in) {
  std::vector<SynthTruth> truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    if (++line_no == 1 || line.empty()) continue;
    const auto f = text::split(line, '\t');
    const auto qid = f.size() == 5 ? text::parse_uint(f[0]) : std::nullopt;
    const auto rid = f.size() == 5 ? text::parse_uint(f[2]) : std::nullopt;
    const auto shift = f.size() == 5 ? text::parse_double(f[4]) : std::nullopt;
    if (!qid || !rid || !shift) throw ParseError(line_no, "malformed truth row");
    truth.push_back({static_cast<std::uint32_t>(*qid), std::string(f[1]), static_cast<std::uint32_t>(*rid),
                     std::string(f[3]), *shift});
  }
  return truth;
}

std::vector<SynthTruth> read_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_truth(in);
}

}  // namespace hdoms
