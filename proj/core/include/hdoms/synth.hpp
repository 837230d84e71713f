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
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hdoms/preprocess.hpp"
#include "hdoms/spectrum.hpp"

namespace hdoms {

// Deterministic synthetic library/query generator. Peaks sit at bin centres
// with intensities exactly on quantization levels of `preprocess`, so a
// perturbation of one level in the raw data is one level after quantization.
struct SynthConfig {
  std::uint32_t n_refs = 1000;
  std::uint32_t n_queries = 100;
  std::uint32_t peaks = 50;
  double perturb = 0.0;         // fraction of non-base peaks moved by one level
  double dropout = 0.0;         // fraction of non-base peaks removed
  double decoy_fraction = 0.0;  // fraction of library entries that are decoys
  double mass_shift_fraction = 0.0;
  double max_mass_shift = 50.0;  // Da; shifted queries move by +-U[1, max]
  double pmz_min = 400.0;
  double pmz_max = 1600.0;
  double fragment_mz_min = 100.0;
  double fragment_mz_max = 1800.0;
  std::vector<int> charges = {2, 3};
  std::uint64_t seed = 1;
  std::string decoy_prefix = kDefaultDecoyPrefix;
  PreprocessConfig preprocess;

  void validate() const;
};

struct SynthTruth {
  std::uint32_t query_id = 0;
  std::string query_title;
  std::uint32_t ref_id = 0;
  std::string ref_title;
  double mass_shift = 0.0;

  friend bool operator==(const SynthTruth&, const SynthTruth&) = default;
};

struct SynthData {
  std::vector<Spectrum> library;  // ids equal positions, as parse_mgf assigns them
  std::vector<Spectrum> queries;
  std::vector<SynthTruth> truth;  // one row per query
};

SynthData synthesize(const SynthConfig& cfg);

void write_truth(std::ostream& out, const std::vector<SynthTruth>& truth);
std::vector<SynthTruth> read_truth(std::istream& in);
std::vector<SynthTruth> read_truth_file(const std::string& path);

}  // namespace hdoms
