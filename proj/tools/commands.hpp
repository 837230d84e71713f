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

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "hdoms/fdr.hpp"
#include "hdoms/search.hpp"
#include "hdoms/synth.hpp"
#include "run_config.hpp"

namespace hdoms::app {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitData = 3 };

struct ChargeSummary {
  int charge = 0;
  std::size_t records = 0;
  std::size_t blocks = 0;
};

struct IndexSummary {
  std::size_t records = 0;
  std::size_t skipped = 0;
  std::vector<ChargeSummary> charges;
};

struct IndexOptions {
  std::string library;
  std::string output;
  RunConfig cfg;
};

// parse -> preprocess -> encode -> build -> atomic save.
IndexSummary cmd_index(const IndexOptions& opts, std::ostream& log);

struct SearchOptions {
  std::string queries;
  std::string index;
  std::string output;       // accepted PSMs, both modes
  std::string stats_path;   // default: output + ".stats"
  std::string json_path;    // optional JSON report
  std::string unfiltered;   // optional: every best-match PSM before FDR
  RunConfig cfg;
};

struct SearchOutcome {
  SearchResult raw;
  FdrResult standard;
  FdrResult open;
  FdrSummary summary;
};

// Encoding parameters come from the index; an explicit setting that disagrees
// raises IncompatibleError.
SearchOutcome cmd_search(const SearchOptions& opts, std::ostream& log);

struct SynthOptions {
  SynthConfig synth;
  std::string out_dir = ".";
};

// Writes library.mgf, queries.mgf and truth.tsv into out_dir.
void cmd_synth(const SynthOptions& opts, std::ostream& log);

struct ReportOptions {
  std::vector<std::string> stats_files;
  std::string truth;   // optional ground-truth sidecar from synth
  std::string output;  // CSV path; empty writes to the log stream
};

// One CSV row per stats file, sorted by open tolerance then ppm tolerance.
void cmd_report(const ReportOptions& opts, std::ostream& out);

inline constexpr const char* kReportHeader =
    "open_tol_da,tol_ppm,queries,comparisons,blocks_scored,standard_ids,open_ids,overlap,standard_cutoff,"
    "open_cutoff,standard_fdr,open_fdr,standard_precision,open_precision";

// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdoms::app
