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

#include "glan/numerics/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace glan::checkpoint {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

namespace {

template <typename U>
void put(std::ostream& out, U value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(U));
}

template <typename U>
U get(std::istream& in) {
  U value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(U))) throw FormatError("checkpoint truncated");
  return value;
}

}  // namespace

template <typename T>
void write(std::ostream& out, const ParamStore<T>& params) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, sizeof(T));
  put<std::uint64_t>(out, params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Parameter<T>& p = params[i];
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p.value.rank()));
    for (std::size_t e : p.value.shape()) put<std::uint64_t>(out, e);
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(T)));
  }
  if (!out) throw FormatError("failed writing checkpoint");
}

template <typename T>
void save(const std::filesystem::path& path, const ParamStore<T>& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write(out, params);
}

template <typename T>
ParamStore<T> read(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a GLAN checkpoint (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  const auto precision = get<std::uint32_t>(in);
  if (precision != sizeof(T)) {
    throw FormatError("checkpoint precision is " + std::to_string(precision * 8) + "-bit, expected " +
                      std::to_string(sizeof(T) * 8) + "-bit");
  }
  const auto count = get<std::uint64_t>(in);
  ParamStore<T> params;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto name_len = get<std::uint32_t>(in);
    std::string name(name_len, '\0');
    if (!in.read(name.data(), name_len)) throw FormatError("checkpoint truncated in record name");
    const auto rank = get<std::uint32_t>(in);
    Shape shape(rank);
    for (auto& e : shape) e = static_cast<std::size_t>(get<std::uint64_t>(in));
    std::vector<T> values(shape_size(shape));
    if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(T)))) {
      throw FormatError("checkpoint truncated in values of " + name);
    }
    params.add(std::move(name), Tensor<T>(std::move(shape), std::move(values)));
  }
  return params;
}

template <typename T>
ParamStore<T> load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  return read<T>(in);
}

std::uint32_t stored_precision(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a GLAN checkpoint (bad magic): " + path.string());
  }
  get<std::uint32_t>(in);
  return get<std::uint32_t>(in);
}

template void write<float>(std::ostream&, const ParamStore<float>&);
template void write<double>(std::ostream&, const ParamStore<double>&);
template void save<float>(const std::filesystem::path&, const ParamStore<float>&);
template void save<double>(const std::filesystem::path&, const ParamStore<double>&);
template ParamStore<float> read<float>(std::istream&);
template ParamStore<double> read<double>(std::istream&);
template ParamStore<float> load<float>(const std::filesystem::path&);
template ParamStore<double> load<double>(const std::filesystem::path&);

}  // namespace glan::checkpoint
