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

#include <optional>
#include <string>

#include "glan/numerics/init.hpp"
#include "glan/numerics/ops.hpp"

namespace glan {

using ops::KeyMask;

// Per-head projections are column blocks of the d x d matrices: head i uses
// columns [i * d/h, (i + 1) * d/h) of wq, wk and wv.
template <typename T>
struct MultiHeadParams {
  Parameter<T>* wq = nullptr;
  Parameter<T>* wk = nullptr;
  Parameter<T>* wv = nullptr;
  Parameter<T>* wo = nullptr;
  std::size_t heads = 1;

  std::size_t dim() const { return wq->value.rows(); }

  static MultiHeadParams create(ParamStore<T>& store, const std::string& prefix, std::size_t d, std::size_t heads,
                                double init_range, Rng& rng);
};

struct AttentionOptions {
  // Scale logits by 1/sqrt(d/h) inside each head; false uses 1/sqrt(d).
  bool per_head_scale = true;
};

// Row-softmax of Q K^T * scale; masked key columns get exactly zero weight.
template <typename T>
Var attention_weights(Tape<T>& tape, Var q, Var k, KeyMask mask, T scale);

// softmax(Q K^T / sqrt(d')) V with d' = cols(Q) unless `scale` is given.
template <typename T>
Var scaled_dot_attention(Tape<T>& tape, Var q, Var k, Var v, KeyMask mask = {},
                         std::optional<T> scale = std::nullopt);

// [Z_1; ...; Z_h] W_o with Z_i = Attention(Q W^Q_i, K W^K_i, V W^V_i).
template <typename T>
Var multi_head_attention(Tape<T>& tape, Var q, Var k, Var v, const MultiHeadParams<T>& params,
                         KeyMask mask = {}, AttentionOptions options = {});

}  // namespace glan
