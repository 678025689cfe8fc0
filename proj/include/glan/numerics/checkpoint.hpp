// ----------------------------------------------------------------------------
// Copyright 2026 The GLAN Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ----------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "glan/numerics/tape.hpp"

// Flat binary parameter file, little-endian:
//
//   magic      8 bytes  "GLANCKPT"
//   version    u32      1
//   precision  u32      bytes per value: 4 or 8
//   count      u64      number of records
//   record*    u32 name length, name bytes (UTF-8),
//              u32 rank, u64 extent[rank],
//              raw values (precision bytes each, row-major)
namespace glan::checkpoint {

inline constexpr char kMagic[8] = {'G', 'L', 'A', 'N', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kVersion = 1;

template <typename T>
void write(std::ostream& out, const ParamStore<T>& params);

template <typename T>
void save(const std::filesystem::path& path, const ParamStore<T>& params);

// Throws FormatError on a bad magic/version, truncation, or when the stored
// precision differs from T.
template <typename T>
ParamStore<T> read(std::istream& in);

template <typename T>
ParamStore<T> load(const std::filesystem::path& path);

// Bytes per value recorded in a checkpoint header.
std::uint32_t stored_precision(const std::filesystem::path& path);

}  // namespace glan::checkpoint
