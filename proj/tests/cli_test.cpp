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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "hdoms/errors.hpp"
#include "hdoms/psm.hpp"
#include "hdoms/synth.hpp"
#include "hdoms/text_format.hpp"
#include "run_config.hpp"
#include "test_util.hpp"

namespace hdoms::app {
namespace {

namespace fs = std::filesystem;
using hdoms::testing::TempDir;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

struct Cli {
  std::ostringstream out;
  std::ostringstream err;
  int operator()(const std::vector<std::string>& args) {
    out.str({});
    err.str({});
    return run_cli(args, out, err);
  }
};

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const std::string& value) : name_(name) { ::setenv(name, value.c_str(), 1); }
  ~ScopedEnv() { ::unsetenv(name_); }
  ScopedEnv(const ScopedEnv&) = delete;
  ScopedEnv& operator=(const ScopedEnv&) = delete;

 private:
  const char* name_;
};

TEST(RunConfig, Defaults) {
  const auto cfg = RunConfig::merge({}, {});
  EXPECT_EQ(cfg.dim, 4096U);
  EXPECT_EQ(cfg.max_r, 4096U);
  EXPECT_EQ(cfg.search.q_block, 16U);
  EXPECT_EQ(cfg.search.max_q, 2048U);
  EXPECT_DOUBLE_EQ(cfg.search.tol_ppm, 20.0);
  EXPECT_DOUBLE_EQ(cfg.search.open_tol_da, 75.0);
  EXPECT_DOUBLE_EQ(cfg.fdr.threshold, 0.01);
  EXPECT_DOUBLE_EQ(cfg.preprocess.bin_size, 0.05);
  EXPECT_TRUE(cfg.explicit_keys.empty());
}

// Each key: defaults < file < flags, checked one field at a time.
TEST(RunConfig, PrecedencePerField) {
  struct Case {
    std::string key;
    std::string file_value;
    std::string flag_value;
    std::function<std::string(const RunConfig&)> get;
  };
  const auto d = [](double v) { return text::format_double(v); };
  const std::vector<Case> cases = {
      {"bin-size", "0.1", "0.02", [&](const RunConfig& c) { return d(c.preprocess.bin_size); }},
      {"mz-min", "60", "70", [&](const RunConfig& c) { return d(c.preprocess.mz_min); }},
      {"mz-max", "2000", "1800", [&](const RunConfig& c) { return d(c.preprocess.mz_max); }},
      {"levels", "32", "16", [](const RunConfig& c) { return std::to_string(c.preprocess.num_levels); }},
      {"dim", "2048", "1024", [](const RunConfig& c) { return std::to_string(c.dim); }},
      {"seed", "7", "8", [](const RunConfig& c) { return std::to_string(c.seed); }},
      {"max-r", "100", "200", [](const RunConfig& c) { return std::to_string(c.max_r); }},
      {"q-block", "8", "4", [](const RunConfig& c) { return std::to_string(c.search.q_block); }},
      {"max-q", "512", "256", [](const RunConfig& c) { return std::to_string(c.search.max_q); }},
      {"tol-ppm", "10", "5", [&](const RunConfig& c) { return d(c.search.tol_ppm); }},
      {"open-tol-da", "50", "20", [&](const RunConfig& c) { return d(c.search.open_tol_da); }},
      {"fdr", "0.05", "0.02", [&](const RunConfig& c) { return d(c.fdr.threshold); }},
      {"cache-budget-bytes", "1000000", "2000000",
       [](const RunConfig& c) { return std::to_string(c.cache_budget_bytes); }},
      {"workers", "3", "2", [](const RunConfig& c) { return std::to_string(c.search.workers); }},
      {"decoy-prefix", "REV_", "XXX_", [](const RunConfig& c) { return c.decoy_prefix; }},
      {"count-comparisons", "false", "true",
       [](const RunConfig& c) { return std::string(c.search.count_comparisons ? "true" : "false"); }},
  };
  const RunConfig defaults = RunConfig::merge({}, {});
  for (const auto& c : cases) {
    const auto from_file = RunConfig::merge({{c.key, c.file_value}}, {});
    const auto from_flag = RunConfig::merge({{c.key, c.file_value}}, {{c.key, c.flag_value}});
    EXPECT_NE(c.get(defaults), c.get(from_file)) << c.key;
    EXPECT_EQ(c.get(from_file), c.get(RunConfig::merge({}, {{c.key, c.file_value}}))) << c.key;
    EXPECT_EQ(c.get(from_flag), c.get(RunConfig::merge({}, {{c.key, c.flag_value}}))) << c.key;
    EXPECT_NE(c.get(from_flag), c.get(from_file)) << c.key;
    EXPECT_TRUE(from_file.explicit_keys.count(c.key)) << c.key;
  }
}

TEST(RunConfig, FileSyntaxAndErrors) {
  TempDir dir;
  spit(dir.file("a.conf"), "# comment\n\ntol_ppm = 12\nopen-tol-da=30\n");
  const auto kv = read_config_file(dir.file("a.conf"));
  const auto cfg = RunConfig::merge(kv, {});
  EXPECT_DOUBLE_EQ(cfg.search.tol_ppm, 12.0);
  EXPECT_DOUBLE_EQ(cfg.search.open_tol_da, 30.0);
  EXPECT_THROW(RunConfig::merge({{"bogus", "1"}}, {}), ConfigError);
  EXPECT_THROW(RunConfig::merge({{"dim", "abc"}}, {}), ConfigError);
  EXPECT_THROW(RunConfig::merge({{"q-block", "64"}, {"max-q", "32"}}, {}), ConfigError);
  EXPECT_THROW(read_config_file(dir.file("missing.conf")), IoError);
}

TEST(RunConfig, EnvironmentNamesDefaultFile) {
  TempDir dir;
  spit(dir.file("env.conf"), "fdr=0.05\n");
  spit(dir.file("flag.conf"), "fdr=0.02\n");
  ScopedEnv env(kConfigEnv, dir.file("env.conf"));
  EXPECT_EQ(resolve_config_path(""), dir.file("env.conf"));
  EXPECT_EQ(resolve_config_path(dir.file("flag.conf")), dir.file("flag.conf"));
}

struct Workspace {
  TempDir dir;
  Cli cli;

  std::string p(const std::string& name) const { return dir.file(name); }

  void synth(std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"synth", "--n-refs", "400", "--n-queries", "120", "--perturb", "0.1",
                                     "--dropout", "0.05", "--decoy-fraction", "0.3", "--mass-shift-fraction",
                                     "0.4", "--seed", "5", "--out-dir", dir.path().string()};
    args.insert(args.end(), extra.begin(), extra.end());
    ASSERT_EQ(cli(args), kExitOk) << cli.err.str();
  }
};

TEST(Cli, UsageErrors) {
  Cli cli;
  EXPECT_EQ(cli({}), kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}), kExitUsage);
  EXPECT_EQ(cli({"index", "only-one-arg"}), kExitUsage);
  EXPECT_EQ(cli({"index", "a.mgf", "b.idx", "--dim", "100"}), kExitUsage);
  EXPECT_EQ(cli({"--help"}), kExitOk);
}

TEST(Cli, UnreadableLibraryLeavesNoIndex) {
  Workspace ws;
  EXPECT_EQ(ws.cli({"index", ws.p("nope.mgf"), ws.p("out.idx")}), kExitIo);
  EXPECT_FALSE(ws.cli.err.str().empty());
  EXPECT_EQ(std::distance(fs::directory_iterator(ws.dir.path()), {}), 0);
}

TEST(Cli, MalformedLibraryIsDataError) {
  Workspace ws;
  spit(ws.p("bad.mgf"), "BEGIN IONS\nPEPMASS=500\nCHARGE=2\n100 x\nEND IONS\n");
  EXPECT_EQ(ws.cli({"index", ws.p("bad.mgf"), ws.p("out.idx")}), kExitData);
  EXPECT_NE(ws.cli.err.str().find("line 4"), std::string::npos) << ws.cli.err.str();
  EXPECT_FALSE(fs::exists(ws.p("out.idx")));
}

TEST(Cli, IndexTwiceIsByteIdentical) {
  Workspace ws;
  ws.synth();
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("a.idx"), "--dim", "1024", "--max-r", "64"}), kExitOk)
      << ws.cli.err.str();
  EXPECT_NE(ws.cli.out.str().find("records=400"), std::string::npos) << ws.cli.out.str();
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("b.idx"), "--dim", "1024", "--max-r", "64"}), kExitOk);
  EXPECT_EQ(slurp(ws.p("a.idx")), slurp(ws.p("b.idx")));
  EXPECT_FALSE(slurp(ws.p("a.idx")).empty());
}

TEST(Cli, SearchRejectsIncompatibleInputs) {
  Workspace ws;
  ws.synth();
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("lib.idx"), "--dim", "512"}), kExitOk);
  EXPECT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("out.tsv"), "--dim", "1024"}), kExitData);
  EXPECT_NE(ws.cli.err.str().find("dim"), std::string::npos);
  EXPECT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("out.tsv"), "--bin-size", "0.1"}),
            kExitData);
  // Repeating the index's own value is not a conflict.
  EXPECT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("out.tsv"), "--dim", "512"}), kExitOk)
      << ws.cli.err.str();

  std::string bytes = slurp(ws.p("lib.idx"));
  bytes[8] = 9;
  spit(ws.p("v9.idx"), bytes);
  EXPECT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("v9.idx"), ws.p("out.tsv")}), kExitData);
  EXPECT_NE(ws.cli.err.str().find("9"), std::string::npos);
  EXPECT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("missing.idx"), ws.p("out.tsv")}), kExitIo);
}

TEST(Cli, SearchOutputsAndEnvConfig) {
  Workspace ws;
  ws.synth();
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("lib.idx"), "--dim", "1024", "--max-r", "32"}), kExitOk);
  spit(ws.p("run.conf"), "open_tol_da=40\nworkers=2\n");
  ScopedEnv env(kConfigEnv, ws.p("run.conf"));
  ASSERT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("out.tsv"), "--report-json",
                    ws.p("out.json"), "--tol-ppm", "15"}),
            kExitOk)
      << ws.cli.err.str();
  const std::string stats = slurp(ws.p("out.tsv.stats"));
  EXPECT_NE(stats.find("open_tol_da=40\n"), std::string::npos) << stats;
  EXPECT_NE(stats.find("tol_ppm=15\n"), std::string::npos);
  EXPECT_NE(stats.find("workers=2\n"), std::string::npos);
  EXPECT_NE(stats.find("comparisons="), std::string::npos);
  const auto psms = read_psms_file(ws.p("out.tsv"));
  EXPECT_FALSE(psms.empty());
  for (const auto& p : psms) EXPECT_FALSE(p.is_decoy);
  EXPECT_NE(slurp(ws.p("out.json")).find("\"comparisons\""), std::string::npos);
}

TEST(Cli, SelfSearchAcceptsEveryQuery) {
  Workspace ws;
  ASSERT_EQ(ws.cli({"synth", "--n-refs", "300", "--n-queries", "100", "--seed", "3", "--out-dir",
                    ws.dir.path().string()}),
            kExitOk);
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("lib.idx")}), kExitOk);
  ASSERT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("out.tsv")}), kExitOk);
  const auto truth = read_truth_file(ws.p("truth.tsv"));
  std::map<std::uint32_t, Psm> standard;
  for (const auto& p : read_psms_file(ws.p("out.tsv"))) {
    if (p.mode == SearchMode::kStandard) standard[p.query_id] = p;
  }
  ASSERT_EQ(standard.size(), truth.size());
  for (const auto& t : truth) {
    EXPECT_EQ(standard[t.query_id].ref_id, t.ref_id);
    EXPECT_EQ(standard[t.query_id].score, 4096);
  }
}

TEST(Cli, WorkersDoNotChangeOutput) {
  Workspace ws;
  ws.synth();
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("lib.idx"), "--dim", "1024", "--max-r", "16"}), kExitOk);
  ASSERT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("w1.tsv"), "--workers", "1"}), kExitOk);
  ASSERT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("w8.tsv"), "--workers", "8"}), kExitOk);
  EXPECT_EQ(slurp(ws.p("w1.tsv")), slurp(ws.p("w8.tsv")));
}

std::uint64_t stat_value(const std::string& stats, const std::string& key) {
  const auto pos = stats.find("\n" + key + "=");
  EXPECT_NE(pos, std::string::npos) << key;
  return std::stoull(stats.substr(pos + key.size() + 2));
}

TEST(Cli, ReportSweepIsSortedWithPrecision) {
  Workspace ws;
  ws.synth();
  ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("lib.idx"), "--dim", "1024", "--max-r", "16"}), kExitOk);
  std::vector<std::string> stats_files;
  std::uint64_t prev = 0;
  for (const std::string tol : {"150", "20", "75", "50"}) {
    const std::string out = ws.p("sweep_" + tol + ".tsv");
    ASSERT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), out, "--open-tol-da", tol}), kExitOk);
    stats_files.push_back(out + ".stats");
  }
  for (const std::string tol : {"20", "50", "75", "150"}) {
    const auto c = stat_value(slurp(ws.p("sweep_" + tol + ".tsv.stats")), "comparisons");
    EXPECT_GE(c, prev) << tol;
    prev = c;
  }

  std::vector<std::string> args = {"report", "--truth", ws.p("truth.tsv"), "--out", ws.p("report.csv")};
  args.insert(args.end(), stats_files.begin(), stats_files.end());
  ASSERT_EQ(ws.cli(args), kExitOk) << ws.cli.err.str();
  std::istringstream csv(slurp(ws.p("report.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, kReportHeader);
  std::vector<std::string> header;
  for (auto h : text::split(line, ',')) header.emplace_back(h);
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const auto truth = read_truth_file(ws.p("truth.tsv"));
  std::vector<double> tols;
  while (std::getline(csv, line)) {
    const auto f = text::split(line, ',');
    ASSERT_EQ(f.size(), header.size());
    tols.push_back(std::stod(std::string(f[col("open_tol_da")])));
    // Precision recomputed from the PSM file and truth sidecar.
    const auto tol = std::string(f[col("open_tol_da")]);
    const auto psms = read_psms_file(ws.p("sweep_" + tol + ".tsv"));
    std::size_t n[2] = {0, 0};
    std::size_t hit[2] = {0, 0};
    for (const auto& p : psms) {
      const int m = static_cast<int>(p.mode);
      ++n[m];
      hit[m] += truth[p.query_id].ref_id == p.ref_id ? 1 : 0;
    }
    EXPECT_NEAR(std::stod(std::string(f[col("standard_precision")])),
                static_cast<double>(hit[0]) / static_cast<double>(n[0]), 1e-12);
    EXPECT_NEAR(std::stod(std::string(f[col("open_precision")])),
                static_cast<double>(hit[1]) / static_cast<double>(n[1]), 1e-12);
  }
  EXPECT_EQ(tols, (std::vector<double>{20, 50, 75, 150}));

  ws.cli({"report", stats_files.front()});
  const std::string single = ws.cli.out.str();
  EXPECT_EQ(std::count(single.begin(), single.end(), '\n'), 2);
  EXPECT_NE(ws.cli({"report", ws.p("missing.stats")}), kExitOk);
}

TEST(Cli, PipelineTwiceIsByteIdentical) {
  std::string first;
  for (int run = 0; run < 2; ++run) {
    Workspace ws;
    ws.synth();
    ASSERT_EQ(ws.cli({"index", ws.p("library.mgf"), ws.p("lib.idx"), "--dim", "512"}), kExitOk);
    ASSERT_EQ(ws.cli({"search", ws.p("queries.mgf"), ws.p("lib.idx"), ws.p("out.tsv")}), kExitOk);
    const std::string both = slurp(ws.p("lib.idx")) + slurp(ws.p("out.tsv"));
    if (run == 0) {
      first = both;
    } else {
      EXPECT_EQ(both, first);
    }
  }
}

}  // namespace
}  // namespace hdoms::app
