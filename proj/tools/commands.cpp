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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdoms/block_cache.hpp"
#include "hdoms/errors.hpp"
#include "hdoms/library_index.hpp"
#include "hdoms/mgf.hpp"
#include "hdoms/pipeline.hpp"
#include "hdoms/psm.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms::app {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

void check_encoding_overrides(const RunConfig& cfg, const IndexReader& reader) {
  const auto& pp = reader.manifest().preprocess;
  const auto& im = reader.item_memory();
  std::vector<std::string> conflicts;
  const auto check = [&](const char* key, bool same) {
    if (cfg.explicit_keys.count(key) != 0 && !same) conflicts.emplace_back(key);
  };
  check("bin-size", cfg.preprocess.bin_size == pp.bin_size);
  check("mz-min", cfg.preprocess.mz_min == pp.mz_min);
  check("mz-max", cfg.preprocess.mz_max == pp.mz_max);
  check("levels", cfg.preprocess.num_levels == pp.num_levels);
  check("rel-intensity-floor", cfg.preprocess.rel_intensity_floor == pp.rel_intensity_floor);
  check("intensity-transform", cfg.preprocess.intensity_transform == pp.intensity_transform);
  check("drop-level-zero", cfg.preprocess.drop_level_zero == pp.drop_level_zero);
  check("dim", cfg.dim == reader.manifest().dim);
  check("seed", cfg.seed == im.seed());
  if (!conflicts.empty()) {
    std::string list;
    for (const auto& c : conflicts) list += (list.empty() ? "" : ", ") + c;
    throw IncompatibleError("encoding parameters are fixed by the index " + reader.path() +
                            "; conflicting setting(s): " + list);
  }
}

nlohmann::json stats_json(const SearchOptions& opts, const SearchOutcome& o, double encode_s, double fdr_s) {
  const auto& st = o.raw.stats;
  const auto& sm = o.summary;
  const auto opt = [](const std::optional<std::int32_t>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  return {
      {"queries_file", opts.queries},
      {"index_file", opts.index},
      {"psm_file", opts.output},
      {"config",
       {{"tol_ppm", opts.cfg.search.tol_ppm},
        {"open_tol_da", opts.cfg.search.open_tol_da},
        {"q_block", opts.cfg.search.q_block},
        {"max_q", opts.cfg.search.max_q},
        {"workers", opts.cfg.search.workers},
        {"fdr", opts.cfg.fdr.threshold},
        {"cache_budget_bytes", opts.cfg.cache_budget_bytes}}},
      {"search",
       {{"queries", st.queries},
        {"groups", st.groups},
        {"segments", st.segments},
        {"comparisons", st.comparisons},
        {"blocks_scored", st.blocks_scored},
        {"cache_hits", st.cache_hits},
        {"cache_misses", st.cache_misses}}},
      {"fdr",
       {{"standard_accepted", sm.standard_accepted},
        {"open_accepted", sm.open_accepted},
        {"overlap", sm.overlap},
        {"union", sm.union_size},
        {"standard_cutoff", opt(sm.standard_cutoff)},
        {"open_cutoff", opt(sm.open_cutoff)},
        {"standard_fdr", sm.standard_fdr},
        {"open_fdr", sm.open_fdr}}},
      {"timing_seconds", {{"encode", encode_s}, {"search", st.search_seconds}, {"fdr", fdr_s}}},
  };
}

}  // namespace

IndexSummary cmd_index(const IndexOptions& opts, std::ostream& log) {
  const RunConfig& cfg = opts.cfg;
  cfg.validate();
  auto parsed = parse_mgf_file(opts.library, cfg.decoy_prefix);
  const ItemMemory im = make_item_memory(cfg.preprocess, cfg.dim, cfg.seed);
  auto refs = encode_library(parsed.spectra, cfg.preprocess, im, cfg.search.workers);
  const LibraryIndex index = build_index(std::move(refs), cfg.max_r, cfg.preprocess, im);
  save_index(index, opts.output);

  IndexSummary summary;
  summary.records = index.manifest.record_count();
  summary.skipped = parsed.skipped;
  for (const auto& part : index.manifest.partitions) {
    ChargeSummary c{part.charge, 0, part.blocks.size()};
    for (const auto& b : part.blocks) c.records += b.count;
    summary.charges.push_back(c);
  }
  log << "records=" << summary.records << '\n' << "skipped=" << summary.skipped << '\n';
  for (const auto& c : summary.charges) {
    log << "charge=" << c.charge << " records=" << c.records << " blocks=" << c.blocks << '\n';
  }
  log << "blocks=" << index.manifest.block_count() << '\n';
  return summary;
}

SearchOutcome cmd_search(const SearchOptions& opts, std::ostream& log) {
  const RunConfig& cfg = opts.cfg;
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const IndexReader reader(opts.index);
  check_encoding_overrides(cfg, reader);
  const auto parsed = parse_mgf_file(opts.queries, cfg.decoy_prefix);
  const auto queries =
      encode_queries(parsed.spectra, reader.manifest().preprocess, reader.item_memory(), cfg.search.workers);
  const double encode_s = seconds_since(t_start);

  BlockCache cache = make_cache(reader, cfg.cache_budget_bytes);
  SearchOutcome o;
  o.raw = search_all(queries, reader.manifest(), cache, cfg.search);

  const auto t_fdr = std::chrono::steady_clock::now();
  o.standard = filter_fdr(o.raw.standard, cfg.fdr);
  o.open = filter_fdr(o.raw.open, cfg.fdr);
  o.summary = fdr_summary(o.standard, o.open);
  const double fdr_s = seconds_since(t_fdr);

  std::vector<Psm> accepted = o.standard.accepted;
  accepted.insert(accepted.end(), o.open.accepted.begin(), o.open.accepted.end());
  write_psms_file(accepted, opts.output);
  if (!opts.unfiltered.empty()) {
    std::vector<Psm> all = o.raw.standard;
    all.insert(all.end(), o.raw.open.begin(), o.raw.open.end());
    write_psms_file(all, opts.unfiltered);
  }

  const std::string stats_path = opts.stats_path.empty() ? opts.output + ".stats" : opts.stats_path;
  {
    std::ofstream st(stats_path, std::ios::trunc);
    if (!st) throw IoError("cannot create " + stats_path);
    st << "queries_file=" << opts.queries << '\n'
       << "index_file=" << opts.index << '\n'
       << "psm_file=" << fs::absolute(opts.output).string() << '\n'
       << "skipped_queries=" << parsed.skipped << '\n'
       << "tol_ppm=" << text::format_double(cfg.search.tol_ppm) << '\n'
       << "open_tol_da=" << text::format_double(cfg.search.open_tol_da) << '\n'
       << "q_block=" << cfg.search.q_block << '\n'
       << "max_q=" << cfg.search.max_q << '\n'
       << "max_r=" << reader.manifest().max_r << '\n'
       << "dim=" << reader.manifest().dim << '\n'
       << "workers=" << cfg.search.workers << '\n'
       << "fdr_threshold=" << text::format_double(cfg.fdr.threshold) << '\n'
       << o.raw.stats.to_key_values() << o.summary.to_key_values()
       << "encode_seconds=" << text::format_double(encode_s) << '\n'
       << "fdr_seconds=" << text::format_double(fdr_s) << '\n';
    if (!st) throw IoError("write failed on " + stats_path);
  }
  if (!opts.json_path.empty()) {
    std::ofstream js(opts.json_path, std::ios::trunc);
    if (!js) throw IoError("cannot create " + opts.json_path);
    js << stats_json(opts, o, encode_s, fdr_s).dump(2) << '\n';
  }

  log << o.raw.stats.to_key_values() << o.summary.to_key_values();
  return o;
}

void cmd_synth(const SynthOptions& opts, std::ostream& log) {
  const SynthData data = synthesize(opts.synth);
  fs::create_directories(opts.out_dir);
  const auto write_file = [](const fs::path& path, const auto& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    writer(out);
    out.flush();
    if (!out) throw IoError("write failed on " + path.string());
  };
  const fs::path dir(opts.out_dir);
  write_file(dir / "library.mgf", [&](std::ostream& o) { write_mgf(o, data.library); });
  write_file(dir / "queries.mgf", [&](std::ostream& o) { write_mgf(o, data.queries); });
  write_file(dir / "truth.tsv", [&](std::ostream& o) { write_truth(o, data.truth); });
  log << "library=" << (dir / "library.mgf").string() << " spectra=" << data.library.size() << '\n'
      << "queries=" << (dir / "queries.mgf").string() << " spectra=" << data.queries.size() << '\n'
      << "truth=" << (dir / "truth.tsv").string() << '\n';
}

namespace {

struct ReportRow {
  double open_tol_da = 0.0;
  double tol_ppm = 0.0;
  std::string line;
};

std::map<std::string, std::string> read_stats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stats file " + path);
  std::ostringstream body;
  body << in.rdbuf();
  std::map<std::string, std::string> kv;
  for (auto& [k, v] : text::parse_key_values(body.str())) kv[k] = v;
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key, const std::string& path) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError(0, path + ": missing key " + key);
  return it->second;
}

}  // namespace

void cmd_report(const ReportOptions& opts, std::ostream& out) {
  if (opts.stats_files.empty()) throw ConfigError("report needs at least one stats file");
  std::unordered_map<std::uint32_t, std::uint32_t> truth;
  if (!opts.truth.empty()) {
    for (const auto& t : read_truth_file(opts.truth)) truth[t.query_id] = t.ref_id;
  }

  std::vector<ReportRow> rows;
  for (const auto& path : opts.stats_files) {
    const auto kv = read_stats(path);
    fs::path psm_path = need(kv, "psm_file", path);
    if (psm_path.is_relative()) psm_path = fs::path(path).parent_path() / psm_path;
    const auto psms = read_psms_file(psm_path.string());

    std::size_t ids[2] = {0, 0};
    std::size_t correct[2] = {0, 0};
    std::map<std::uint32_t, int> modes_per_query;
    for (const auto& p : psms) {
      const int m = static_cast<int>(p.mode);
      ++ids[m];
      modes_per_query[p.query_id] |= 1 << m;
      if (const auto it = truth.find(p.query_id); it != truth.end() && it->second == p.ref_id) ++correct[m];
    }
    std::size_t overlap = 0;
    for (const auto& [q, mask] : modes_per_query) overlap += mask == 3 ? 1 : 0;
    const auto precision = [&](int m) {
      if (opts.truth.empty() || ids[m] == 0) return std::string("NA");
      return text::format_double(static_cast<double>(correct[m]) / static_cast<double>(ids[m]));
    };

    ReportRow row;
    const auto open_tol = text::parse_double(need(kv, "open_tol_da", path));
    const auto ppm = text::parse_double(need(kv, "tol_ppm", path));
    if (!open_tol || !ppm) throw ParseError(0, path + ": bad tolerance values");
    row.open_tol_da = *open_tol;
    row.tol_ppm = *ppm;
    std::ostringstream line;
    line << text::format_double(row.open_tol_da) << ',' << text::format_double(row.tol_ppm) << ','
         << need(kv, "queries", path) << ',' << need(kv, "comparisons", path) << ','
         << need(kv, "blocks_scored", path) << ',' << ids[0] << ',' << ids[1] << ',' << overlap << ','
         << need(kv, "standard_cutoff", path) << ',' << need(kv, "open_cutoff", path) << ','
         << need(kv, "standard_fdr", path) << ',' << need(kv, "open_fdr", path) << ',' << precision(0) << ','
         << precision(1);
    row.line = line.str();
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.open_tol_da != b.open_tol_da) return a.open_tol_da < b.open_tol_da;
    return a.tol_ppm < b.tol_ppm;
  });

  std::ostringstream csv;
  csv << kReportHeader << '\n';
  for (const auto& r : rows) csv << r.line << '\n';
  if (opts.output.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(opts.output, std::ios::trunc);
    if (!f) throw IoError("cannot create " + opts.output);
    f << csv.str();
    if (!f) throw IoError("write failed on " + opts.output);
  }
}

namespace {

// Flag storage for the shared configuration options.
struct ConfigFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool count_comparisons = true;
  CLI::Option* count_option = nullptr;
  std::string config_path;

  void attach(CLI::App* cmd) {
    static const std::vector<std::pair<std::string, std::string>> flags = {
        {"bin-size", "m/z bin width in Thomson"},
        {"mz-min", "lowest fragment m/z kept"},
        {"mz-max", "fragment m/z upper bound (exclusive)"},
        {"levels", "number of intensity levels"},
        {"dim", "hypervector dimension (multiple of 64)"},
        {"seed", "item memory seed"},
        {"max-r", "references per index block"},
        {"q-block", "queries scored together"},
        {"max-q", "queries staged per run segment"},
        {"tol-ppm", "standard search tolerance (ppm)"},
        {"open-tol-da", "open search half-window (Da)"},
        {"fdr", "FDR threshold"},
        {"cache-budget-bytes", "block cache budget"},
        {"workers", "worker threads"},
        {"decoy-prefix", "TITLE prefix marking decoys"},
    };
    for (const auto& [name, help] : flags) options[name] = cmd->add_option("--" + name, values[name], help);
    count_option = cmd->add_flag("--count-comparisons", count_comparisons, "count (query, reference) comparisons");
    cmd->add_option("--config", config_path, "key=value config file (default: $RAPIDOMS_CONFIG)");
  }

  RunConfig merge() const {
    KeyValues file;
    if (const auto path = resolve_config_path(config_path)) file = read_config_file(*path);
    KeyValues cli;
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) cli.emplace_back(name, values.at(name));
    }
    if (count_option->count() > 0) cli.emplace_back("count-comparisons", count_comparisons ? "true" : "false");
    return RunConfig::merge(file, cli);
  }
};

std::vector<int> parse_charges(const std::string& text) {
  std::vector<int> charges;
  for (auto tok : text::split(text, ',')) {
    const int c = parse_charge(tok);
    if (c == 0) throw ConfigError("bad charge list '" + text + "'");
    charges.push_back(c);
  }
  return charges;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperdimensional open modification search for MS/MS spectral libraries", "hdoms"};
  app.require_subcommand(1);

  IndexOptions index_opts;
  ConfigFlags index_flags;
  auto* index_cmd = app.add_subcommand("index", "encode a library MGF into a block index");
  index_cmd->add_option("library", index_opts.library, "library MGF")->required();
  index_cmd->add_option("output", index_opts.output, "index file to write")->required();
  index_flags.attach(index_cmd);

  SearchOptions search_opts;
  ConfigFlags search_flags;
  auto* search_cmd = app.add_subcommand("search", "search query spectra against an index");
  search_cmd->add_option("queries", search_opts.queries, "query MGF")->required();
  search_cmd->add_option("index", search_opts.index, "index file")->required();
  search_cmd->add_option("output", search_opts.output, "accepted PSM TSV")->required();
  search_cmd->add_option("--stats", search_opts.stats_path, "key=value stats (default: <output>.stats)");
  search_cmd->add_option("--report-json", search_opts.json_path, "JSON report");
  search_cmd->add_option("--unfiltered", search_opts.unfiltered, "all best-match PSMs before FDR");
  search_flags.attach(search_cmd);

  SynthOptions synth_opts;
  std::string synth_charges = "2,3";
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic library, queries and ground truth");
  auto& sc = synth_opts.synth;
  synth_cmd->add_option("--n-refs", sc.n_refs, "library size");
  synth_cmd->add_option("--n-queries", sc.n_queries, "query count");
  synth_cmd->add_option("--peaks", sc.peaks, "peaks per spectrum");
  synth_cmd->add_option("--perturb", sc.perturb, "fraction of peaks moved by one intensity level");
  synth_cmd->add_option("--dropout", sc.dropout, "fraction of peaks removed from queries");
  synth_cmd->add_option("--decoy-fraction", sc.decoy_fraction, "fraction of library entries that are decoys");
  synth_cmd->add_option("--mass-shift-fraction", sc.mass_shift_fraction, "fraction of queries with a precursor shift");
  synth_cmd->add_option("--max-mass-shift", sc.max_mass_shift, "largest precursor shift (Da)");
  synth_cmd->add_option("--pmz-min", sc.pmz_min, "lowest precursor m/z");
  synth_cmd->add_option("--pmz-max", sc.pmz_max, "highest precursor m/z");
  synth_cmd->add_option("--charges", synth_charges, "comma-separated precursor charges");
  synth_cmd->add_option("--seed", sc.seed, "generator seed");
  synth_cmd->add_option("--bin-size", sc.preprocess.bin_size, "bin width the peaks are laid out on");
  synth_cmd->add_option("--mz-min", sc.preprocess.mz_min, "m/z of bin 0");
  synth_cmd->add_option("--mz-max", sc.preprocess.mz_max, "m/z upper bound");
  synth_cmd->add_option("--levels", sc.preprocess.num_levels, "intensity levels");
  synth_cmd->add_option("--decoy-prefix", sc.decoy_prefix, "TITLE prefix for decoys");
  synth_cmd->add_option("--out-dir", synth_opts.out_dir, "output directory");

  ReportOptions report_opts;
  auto* report_cmd = app.add_subcommand("report", "tabulate search runs as CSV");
  report_cmd->add_option("stats", report_opts.stats_files, "stats files written by search")->required();
  report_cmd->add_option("--truth", report_opts.truth, "ground truth TSV from synth");
  report_cmd->add_option("--out", report_opts.output, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*index_cmd) {
      index_opts.cfg = index_flags.merge();
      cmd_index(index_opts, out);
    } else if (*search_cmd) {
      search_opts.cfg = search_flags.merge();
      cmd_search(search_opts, out);
    } else if (*synth_cmd) {
      sc.charges = parse_charges(synth_charges);
      cmd_synth(synth_opts, out);
    } else if (*report_cmd) {
      cmd_report(report_opts, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hdoms");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hdoms::app
