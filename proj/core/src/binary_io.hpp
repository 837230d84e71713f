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

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>

#include "hdoms/errors.hpp"

// Little-endian primitive encoding for the index file.
namespace hdoms::detail {

static_assert(std::endian::native == std::endian::little,
              "index serialization assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void put_array(std::ostream& out, std::span<const T> values) {
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size_bytes()));
}

inline void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void read_exact(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw IoError("unexpected end of index data");
}

template <typename T>
T get(std::istream& in) {
  T value{};
  read_exact(in, &value, sizeof(T));
  return value;
}

template <typename T>
void get_array(std::istream& in, std::span<T> values) {
  read_exact(in, values.data(), values.size_bytes());
}

inline std::string get_string(std::istream& in, std::uint32_t max_len = 1U << 28) {
  const auto len = get<std::uint32_t>(in);
  if (len > max_len) throw IoError("string length " + std::to_string(len) + " exceeds limit");
  std::string s(len, '\0');
  read_exact(in, s.data(), len);
  return s;
}

}  // namespace hdoms::detail
