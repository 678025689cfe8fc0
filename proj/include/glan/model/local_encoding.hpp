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

#include "glan/model/attention.hpp"

namespace glan {

template <typename T>
struct LocalParams {
  MultiHeadParams<T> self_attention;
  Parameter<T>* bilinear = nullptr;      // A, d x d
  Parameter<T>* gate_source = nullptr;   // w1, d x 1
  Parameter<T>* gate_context = nullptr;  // w2, d x 1
  Parameter<T>* gate_bias = nullptr;     // b, 1 x 1

  static LocalParams create(ParamStore<T>& store, std::size_t d, std::size_t heads, double init_range, Rng& rng);
};

// Self-attention over the n x d retweet matrix.
template <typename T>
Var refine_retweets(Tape<T>& tape, Var retweets, const LocalParams<T>& params, KeyMask mask = {},
                    AttentionOptions options = {});

struct CrossAttention {
  Var scores;   // 1 x n, softmax of refined * A * m^T
  Var context;  // 1 x d, scores * refined
};

template <typename T>
CrossAttention cross_attend(Tape<T>& tape, Var source, Var refined, Var bilinear, KeyMask mask = {});

struct Fusion {
  Var gate;   // 1 x 1, sigmoid(m w1 + r w2 + b)
  Var fused;  // 1 x d, gate * m + (1 - gate) * r
};

template <typename T>
Fusion fuse(Tape<T>& tape, Var source, Var context, Var w1, Var w2, Var b);

// Full local pipeline for one cascade. `retweets` may be invalid (no
// retweets), in which case the source representation is returned as is.
template <typename T>
Var encode_local(Tape<T>& tape, Var source, Var retweets, const LocalParams<T>& params, KeyMask mask = {},
                 AttentionOptions options = {});

}  // namespace glan
