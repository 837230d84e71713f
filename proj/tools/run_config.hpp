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
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hdoms/fdr.hpp"
#include "hdoms/preprocess.hpp"
#include "hdoms/search.hpp"
#include "hdoms/spectrum.hpp"

namespace hdoms::app {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Environment variable naming a default config file.
inline constexpr const char* kConfigEnv = "RAPIDOMS_CONFIG";

// Everything a command needs, merged as defaults < config file < flags.
// Keys use the long flag spelling without dashes ("open-tol-da"); config
// files may also write them with underscores.
struct RunConfig {
  PreprocessConfig preprocess;
  std::uint32_t dim = 4096;
  std::uint64_t seed = 42;
  std::uint32_t max_r = 4096;
  std::size_t cache_budget_bytes = std::size_t{1} << 30;
  SearchConfig search;
  FdrConfig fdr;
  std::string decoy_prefix = kDefaultDecoyPrefix;

  // Keys set by a file or a flag, in canonical form.
  std::set<std::string> explicit_keys;

  // Throws ConfigError on an unknown key or unparsable value.
  void apply(std::string key, const std::string& value);
  void validate() const;

  static RunConfig merge(const KeyValues& file, const KeyValues& flags);
};

std::string canonical_key(std::string key);

// Keys that determine how spectra are encoded; at search time these come
// from the index and may not be overridden.
const std::set<std::string>& encoding_keys();

// All keys apply() accepts.
const std::vector<std::string>& known_keys();

KeyValues read_config_file(const std::string& path);

// --config wins; otherwise $RAPIDOMS_CONFIG when set.
std::optional<std::string> resolve_config_path(const std::string& flag_value);

}  // namespace hdoms::app
