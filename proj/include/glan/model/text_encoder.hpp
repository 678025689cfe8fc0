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

#include <span>
#include <vector>

#include "glan/numerics/init.hpp"
#include "glan/numerics/ops.hpp"

namespace glan {

// Embedding lookup, one convolution bank per receptive width, ReLU and
// max-over-time pooling. Outputs of all filters are concatenated in
// (width ascending as configured, filter index) order.
template <typename T>
struct TextEncoder {
  Parameter<T>* embedding = nullptr;  // |vocab| x d, row 0 is padding
  std::vector<int> widths;
  std::vector<Parameter<T>*> filters;  // per width: F x (h * d)
  std::vector<Parameter<T>*> biases;   // per width: 1 x F

  std::size_t dim() const { return embedding->value.cols(); }
  std::size_t output_dim() const;

  static TextEncoder create(ParamStore<T>& store, std::size_t vocab_size, std::size_t d,
                            std::span<const int> widths, std::size_t filters_per_width, double init_range,
                            Rng& rng);
};

// ids is N * length token ids; returns the (N * length) x d matrix.
template <typename T>
Var embed(Tape<T>& tape, const TextEncoder<T>& enc, std::span<const int> ids);

// X is (N * length) x d; returns N x output_dim.
template <typename T>
Var conv_maxpool(Tape<T>& tape, const TextEncoder<T>& enc, Var x, std::size_t length);

// Composition of embed and conv_maxpool over N texts of `length` ids each.
template <typename T>
Var encode_microblogs(Tape<T>& tape, const TextEncoder<T>& enc, std::span<const int> ids, std::size_t length);

// Loads a whitespace-separated "token v1 ... vd" embedding file into the
// rows of tokens present in `tokens`; returns how many rows were filled.
template <typename T>
std::size_t load_embeddings(const std::string& path, std::span<const std::string> tokens, Tensor<T>& table);

}  // namespace glan
