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

#include "glan/model/attention.hpp"

#include <cmath>

namespace glan {

template <typename T>
MultiHeadParams<T> MultiHeadParams<T>::create(ParamStore<T>& store, const std::string& prefix, std::size_t d,
                                              std::size_t heads, double init_range, Rng& rng) {
  if (heads == 0 || d % heads != 0) {
    throw ConfigError("multi-head attention: d=" + std::to_string(d) + " not divisible by h=" + std::to_string(heads));
  }
  MultiHeadParams p;
  p.heads = heads;
  p.wq = &store.add(prefix + ".wq", uniform_tensor<T>({d, d}, init_range, rng));
  p.wk = &store.add(prefix + ".wk", uniform_tensor<T>({d, d}, init_range, rng));
  p.wv = &store.add(prefix + ".wv", uniform_tensor<T>({d, d}, init_range, rng));
  p.wo = &store.add(prefix + ".wo", uniform_tensor<T>({d, d}, init_range, rng));
  return p;
}

template <typename T>
Var attention_weights(Tape<T>& tape, Var q, Var k, KeyMask mask, T scale) {
  const auto& K = tape.value(k);
  if (K.rows() == 0) throw DomainError("attention over an empty key set");
  if (tape.value(q).cols() != K.cols()) throw DomainError("attention: query and key widths differ");
  if (!mask.empty() && mask.size() != K.rows()) throw DomainError("attention: mask length differs from key count");
  return ops::softmax_rows(tape, ops::scale(tape, ops::matmul_nt(tape, q, k), scale), mask);
}

template <typename T>
Var scaled_dot_attention(Tape<T>& tape, Var q, Var k, Var v, KeyMask mask, std::optional<T> scale) {
  if (tape.value(k).rows() != tape.value(v).rows()) throw DomainError("attention: K and V row counts differ");
  const T s = scale.value_or(T(1) / std::sqrt(static_cast<T>(tape.value(q).cols())));
  return ops::matmul(tape, attention_weights(tape, q, k, mask, s), v);
}

template <typename T>
Var multi_head_attention(Tape<T>& tape, Var q, Var k, Var v, const MultiHeadParams<T>& params, KeyMask mask,
                         AttentionOptions options) {
  const std::size_t d = params.dim();
  const std::size_t h = params.heads;
  if (h == 0 || d % h != 0) throw ConfigError("multi-head attention: d not divisible by the head count");
  if (tape.value(q).cols() != d || tape.value(k).cols() != d || tape.value(v).cols() != d) {
    throw DomainError("multi-head attention: inputs must have d=" + std::to_string(d) + " columns");
  }
  const std::size_t dk = d / h;
  const T scale = T(1) / std::sqrt(static_cast<T>(options.per_head_scale ? dk : d));
  const Var qp = ops::matmul(tape, q, tape.param(*params.wq));
  const Var kp = ops::matmul(tape, k, tape.param(*params.wk));
  const Var vp = ops::matmul(tape, v, tape.param(*params.wv));
  std::vector<Var> heads;
  heads.reserve(h);
  for (std::size_t i = 0; i < h; ++i) {
    const Var qi = h == 1 ? qp : ops::slice_cols(tape, qp, i * dk, dk);
    const Var ki = h == 1 ? kp : ops::slice_cols(tape, kp, i * dk, dk);
    const Var vi = h == 1 ? vp : ops::slice_cols(tape, vp, i * dk, dk);
    heads.push_back(scaled_dot_attention(tape, qi, ki, vi, mask, std::optional<T>(scale)));
  }
  const Var z = h == 1 ? heads[0] : ops::concat_cols<T>(tape, heads);
  return ops::matmul(tape, z, tape.param(*params.wo));
}

template struct MultiHeadParams<float>;
template struct MultiHeadParams<double>;
template Var attention_weights<float>(Tape<float>&, Var, Var, KeyMask, float);
template Var attention_weights<double>(Tape<double>&, Var, Var, KeyMask, double);
template Var scaled_dot_attention<float>(Tape<float>&, Var, Var, Var, KeyMask, std::optional<float>);
template Var scaled_dot_attention<double>(Tape<double>&, Var, Var, Var, KeyMask, std::optional<double>);
template Var multi_head_attention<float>(Tape<float>&, Var, Var, Var, const MultiHeadParams<float>&, KeyMask,
                                         AttentionOptions);
template Var multi_head_attention<double>(Tape<double>&, Var, Var, Var, const MultiHeadParams<double>&, KeyMask,
                                          AttentionOptions);

}  // namespace glan
