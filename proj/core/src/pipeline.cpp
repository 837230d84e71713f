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

#include "hdoms/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "hdoms/encoder.hpp"

namespace hdoms {

ItemMemory make_item_memory(const PreprocessConfig& cfg, std::uint32_t dim, std::uint64_t seed) {
  cfg.validate();
  return ItemMemory::generate(cfg.bin_count(), static_cast<std::uint32_t>(cfg.num_levels), dim, seed);
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = next.fetch_add(kChunk); b < n; b = next.fetch_add(kChunk)) {
            for (std::size_t i = b; i < std::min(n, b + kChunk); ++i) fn(i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
          next = n;
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<RefRecord> encode_library(const std::vector<Spectrum>& spectra, const PreprocessConfig& cfg,
                                      const ItemMemory& im, unsigned workers) {
  std::vector<RefRecord> out(spectra.size());
  parallel_for(spectra.size(), workers, [&](std::size_t i) {
    const Spectrum& s = spectra[i];
    RefRecord& r = out[i];
    r.ref_id = s.id;
    r.title = s.title;
    r.precursor_mz = s.precursor_mz;
    r.charge = s.charge;
    r.is_decoy = s.is_decoy;
    r.hv = encode_spectrum(preprocess(s, cfg), im);
  });
  return out;
}

std::vector<EncodedQuery> encode_queries(const std::vector<Spectrum>& spectra, const PreprocessConfig& cfg,
                                         const ItemMemory& im, unsigned workers) {
  std::vector<EncodedQuery> out(spectra.size());
  parallel_for(spectra.size(), workers, [&](std::size_t i) {
    const Spectrum& s = spectra[i];
    EncodedQuery& q = out[i];
    q.id = s.id;
    q.title = s.title;
    q.precursor_mz = s.precursor_mz;
    q.charge = s.charge;
    q.hv = encode_spectrum(preprocess(s, cfg), im);
  });
  return out;
}

}  // namespace hdoms
