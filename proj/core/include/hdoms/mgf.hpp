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
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "hdoms/spectrum.hpp"

namespace hdoms {

struct MgfReadResult {
  std::vector<Spectrum> spectra;
  // Records dropped for a missing or unusable CHARGE or PEPMASS.
  std::size_t skipped = 0;
};

// Parses Mascot Generic Format text. Ids are assigned 0,1,2,... to the
// emitted records in file order. Throws ParseError on broken framing or a
// non-numeric peak line.
MgfReadResult parse_mgf(std::istream& in, std::string_view decoy_prefix = kDefaultDecoyPrefix);
MgfReadResult parse_mgf_file(const std::string& path,
                             std::string_view decoy_prefix = kDefaultDecoyPrefix);

// Writes spectra as MGF. Numbers use the shortest round-trip representation,
// so parse_mgf(write_mgf(x)) reproduces every field exactly.
void write_mgf(std::ostream& out, const std::vector<Spectrum>& spectra);
void write_mgf_record(std::ostream& out, const Spectrum& spectrum);

// Accepts "2+", "2", "+2". Returns 0 when the text is not a single charge in [1, 8].
int parse_charge(std::string_view text);

}  // namespace hdoms
