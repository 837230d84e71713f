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

#include "run_config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hdoms/errors.hpp"
#include "hdoms/text_format.hpp"

namespace hdoms::app {

std::string canonical_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  return key;
}

const std::set<std::string>& encoding_keys() {
  static const std::set<std::string> keys = {"bin-size",           "mz-min",
                                             "mz-max",             "levels",
                                             "dim",                "seed",
                                             "rel-intensity-floor", "intensity-transform",
                                             "drop-level-zero"};
  return keys;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "bin-size", "mz-min",  "mz-max", "levels",  "dim",  "seed", "max-r", "q-block", "max-q",
      "tol-ppm",  "open-tol-da", "fdr", "cache-budget-bytes", "workers", "decoy-prefix",
      "count-comparisons", "rel-intensity-floor", "intensity-transform", "drop-level-zero", "factor",
      "fdr-plus-one"};
  return keys;
}

namespace {

double as_double(const std::string& key, const std::string& v) {
  const auto d = text::parse_double(v);
  if (!d) throw ConfigError("--" + key + ": not a number: '" + v + "'");
  return *d;
}

unsigned long long as_uint(const std::string& key, const std::string& v, unsigned long long max) {
  const auto n = text::parse_uint(v);
  if (!n || *n > max) throw ConfigError("--" + key + ": not an integer in range: '" + v + "'");
  return *n;
}

bool as_bool(const std::string& key, const std::string& v) {
  const auto b = text::parse_bool(v);
  if (!b) throw ConfigError("--" + key + ": not a boolean: '" + v + "'");
  return *b;
}

}  // namespace

void RunConfig::apply(std::string key, const std::string& value) {
  key = canonical_key(std::move(key));
  constexpr auto u32 = 0xFFFFFFFFULL;
  if (key == "bin-size") {
    preprocess.bin_size = as_double(key, value);
  } else if (key == "mz-min") {
    preprocess.mz_min = as_double(key, value);
  } else if (key == "mz-max") {
    preprocess.mz_max = as_double(key, value);
  } else if (key == "levels") {
    preprocess.num_levels = static_cast<int>(as_uint(key, value, 65535));
  } else if (key == "rel-intensity-floor") {
    preprocess.rel_intensity_floor = as_double(key, value);
  } else if (key == "intensity-transform") {
    if (value == "sqrt") {
      preprocess.intensity_transform = IntensityTransform::kSqrt;
    } else if (value == "linear") {
      preprocess.intensity_transform = IntensityTransform::kLinear;
    } else {
      throw ConfigError("--intensity-transform must be sqrt or linear");
    }
  } else if (key == "drop-level-zero") {
    preprocess.drop_level_zero = as_bool(key, value);
  } else if (key == "dim") {
    dim = static_cast<std::uint32_t>(as_uint(key, value, u32));
  } else if (key == "seed") {
    seed = as_uint(key, value, ~0ULL);
  } else if (key == "max-r") {
    max_r = static_cast<std::uint32_t>(as_uint(key, value, u32));
  } else if (key == "q-block") {
    search.q_block = static_cast<std::uint32_t>(as_uint(key, value, u32));
  } else if (key == "max-q") {
    search.max_q = static_cast<std::uint32_t>(as_uint(key, value, u32));
  } else if (key == "tol-ppm") {
    search.tol_ppm = as_double(key, value);
  } else if (key == "open-tol-da") {
    search.open_tol_da = as_double(key, value);
  } else if (key == "count-comparisons") {
    search.count_comparisons = as_bool(key, value);
  } else if (key == "workers") {
    search.workers = static_cast<unsigned>(as_uint(key, value, 4096));
  } else if (key == "factor") {
    search.factor = static_cast<std::uint32_t>(as_uint(key, value, u32));
  } else if (key == "fdr") {
    fdr.threshold = as_double(key, value);
  } else if (key == "fdr-plus-one") {
    fdr.conservative_plus_one = as_bool(key, value);
  } else if (key == "cache-budget-bytes") {
    cache_budget_bytes = static_cast<std::size_t>(as_uint(key, value, ~0ULL));
  } else if (key == "decoy-prefix") {
    decoy_prefix = value;
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
  explicit_keys.insert(key);
}

void RunConfig::validate() const {
  preprocess.validate();
  if (dim == 0 || dim % 64 != 0) throw ConfigError("--dim must be a positive multiple of 64");
  if (max_r == 0) throw ConfigError("--max-r must be >= 1");
  if (cache_budget_bytes == 0) throw ConfigError("--cache-budget-bytes must be > 0");
  search.validate();
  fdr.validate();
}

RunConfig RunConfig::merge(const KeyValues& file, const KeyValues& flags) {
  RunConfig cfg;
  for (const auto& [k, v] : file) cfg.apply(k, v);
  for (const auto& [k, v] : flags) cfg.apply(k, v);
  cfg.validate();
  return cfg;
}

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream body;
  body << in.rdbuf();
  try {
    return text::parse_key_values(body.str());
  } catch (const ParseError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::optional<std::string> resolve_config_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') return std::string(env);
  return std::nullopt;
}

}  // namespace hdoms::app
