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

#include "glan/model/text_encoder.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace glan {

template <typename T>
std::size_t TextEncoder<T>::output_dim() const {
  std::size_t n = 0;
  for (const auto* f : filters) n += f->value.rows();
  return n;
}

template <typename T>
TextEncoder<T> TextEncoder<T>::create(ParamStore<T>& store, std::size_t vocab_size, std::size_t d,
                                      std::span<const int> widths, std::size_t filters_per_width,
                                      double init_range, Rng& rng) {
  if (vocab_size < 2) throw DomainError("text encoder needs at least the pad and unk tokens");
  TextEncoder enc;
  Tensor<T> table = uniform_tensor<T>({vocab_size, d}, init_range, rng);
  for (std::size_t j = 0; j < d; ++j) table(0, j) = T(0);
  enc.embedding = &store.add("text.embedding", std::move(table));
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const auto h = static_cast<std::size_t>(widths[i]);
    const std::string base = "text.conv" + std::to_string(i) + "_w" + std::to_string(h);
    enc.widths.push_back(widths[i]);
    enc.filters.push_back(&store.add(base + ".filters", uniform_tensor<T>({filters_per_width, h * d}, init_range, rng)));
    enc.biases.push_back(&store.add(base + ".bias", uniform_tensor<T>({1, filters_per_width}, init_range, rng)));
  }
  return enc;
}

template <typename T>
Var embed(Tape<T>& tape, const TextEncoder<T>& enc, std::span<const int> ids) {
  const auto vocab = static_cast<int>(enc.embedding->value.rows());
  for (int id : ids) {
    if (id < 0 || id >= vocab) {
      throw DomainError("embed: token id " + std::to_string(id) + " outside vocabulary of " + std::to_string(vocab));
    }
  }
  return ops::gather_rows(tape, tape.param(*enc.embedding), ids);
}

template <typename T>
Var conv_maxpool(Tape<T>& tape, const TextEncoder<T>& enc, Var x, std::size_t length) {
  std::vector<Var> parts;
  parts.reserve(enc.filters.size());
  for (std::size_t i = 0; i < enc.filters.size(); ++i) {
    parts.push_back(ops::conv_maxpool(tape, x, length, tape.param(*enc.filters[i]), tape.param(*enc.biases[i])));
  }
  return parts.size() == 1 ? parts[0] : ops::concat_cols<T>(tape, parts);
}

template <typename T>
Var encode_microblogs(Tape<T>& tape, const TextEncoder<T>& enc, std::span<const int> ids, std::size_t length) {
  if (length == 0 || ids.size() % length != 0) throw DomainError("encode_microblogs: ids are not a multiple of length");
  return conv_maxpool(tape, enc, embed(tape, enc, ids), length);
}

template <typename T>
std::size_t load_embeddings(const std::string& path, std::span<const std::string> tokens, Tensor<T>& table) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open embedding file " + path);
  std::unordered_map<std::string, std::size_t> rows;
  for (std::size_t i = 2; i < tokens.size(); ++i) rows.emplace(tokens[i], i);
  std::size_t filled = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    for (double v; fields >> v;) values.push_back(v);
    if (values.size() != table.cols()) {
      throw FormatError("embedding file line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.cols()) + " values");
    }
    auto it = rows.find(token);
    if (it == rows.end()) continue;
    for (std::size_t j = 0; j < values.size(); ++j) table(it->second, j) = static_cast<T>(values[j]);
    ++filled;
  }
  return filled;
}

template struct TextEncoder<float>;
template struct TextEncoder<double>;
template Var embed<float>(Tape<float>&, const TextEncoder<float>&, std::span<const int>);
template Var embed<double>(Tape<double>&, const TextEncoder<double>&, std::span<const int>);
template Var conv_maxpool<float>(Tape<float>&, const TextEncoder<float>&, Var, std::size_t);
template Var conv_maxpool<double>(Tape<double>&, const TextEncoder<double>&, Var, std::size_t);
template Var encode_microblogs<float>(Tape<float>&, const TextEncoder<float>&, std::span<const int>, std::size_t);
template Var encode_microblogs<double>(Tape<double>&, const TextEncoder<double>&, std::span<const int>, std::size_t);
template std::size_t load_embeddings<float>(const std::string&, std::span<const std::string>, Tensor<float>&);
template std::size_t load_embeddings<double>(const std::string&, std::span<const std::string>, Tensor<double>&);

}  // namespace glan
