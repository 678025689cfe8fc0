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

#include "glan/model/local_encoding.hpp"

#include <algorithm>

namespace glan {

template <typename T>
LocalParams<T> LocalParams<T>::create(ParamStore<T>& store, std::size_t d, std::size_t heads, double init_range,
                                      Rng& rng) {
  LocalParams p;
  p.self_attention = MultiHeadParams<T>::create(store, "local.self", d, heads, init_range, rng);
  p.bilinear = &store.add("local.bilinear", uniform_tensor<T>({d, d}, init_range, rng));
  p.gate_source = &store.add("local.gate_source", uniform_tensor<T>({d, 1}, init_range, rng));
  p.gate_context = &store.add("local.gate_context", uniform_tensor<T>({d, 1}, init_range, rng));
  p.gate_bias = &store.add("local.gate_bias", uniform_tensor<T>({1, 1}, init_range, rng));
  return p;
}

template <typename T>
Var refine_retweets(Tape<T>& tape, Var retweets, const LocalParams<T>& params, KeyMask mask,
                    AttentionOptions options) {
  return multi_head_attention(tape, retweets, retweets, retweets, params.self_attention, mask, options);
}

template <typename T>
CrossAttention cross_attend(Tape<T>& tape, Var source, Var refined, Var bilinear, KeyMask mask) {
  const auto& m = tape.value(source);
  const auto& r = tape.value(refined);
  if (m.rows() != 1 || m.cols() != r.cols()) throw DomainError("cross_attend: source must be 1 x d");
  if (r.rows() == 0) throw DomainError("cross_attend: no retweets");
  // (R A m^T)^T = (m A^T) R^T, kept as a row.
  const Var m_a = ops::matmul_nt(tape, source, bilinear);
  const Var logits = ops::matmul_nt(tape, m_a, refined);
  const Var scores = ops::softmax_rows(tape, logits, mask);
  return {scores, ops::matmul(tape, scores, refined)};
}

template <typename T>
Fusion fuse(Tape<T>& tape, Var source, Var context, Var w1, Var w2, Var b) {
  if (!tape.value(source).same_shape(tape.value(context))) throw DomainError("fuse: shape mismatch");
  const Var pre = ops::add(tape, ops::add(tape, ops::matmul(tape, source, w1), ops::matmul(tape, context, w2)), b);
  const Var gate = ops::sigmoid(tape, pre);
  const Var fused = ops::lerp(tape, context, source, gate);
  return {gate, fused};
}

template <typename T>
Var encode_local(Tape<T>& tape, Var source, Var retweets, const LocalParams<T>& params, KeyMask mask,
                 AttentionOptions options) {
  if (!retweets.valid()) return source;
  if (!mask.empty() && std::none_of(mask.begin(), mask.end(), [](unsigned char k) { return k != 0; })) {
    return source;
  }
  const Var refined = refine_retweets(tape, retweets, params, mask, options);
  const CrossAttention cross = cross_attend(tape, source, refined, tape.param(*params.bilinear), mask);
  return fuse(tape, source, cross.context, tape.param(*params.gate_source), tape.param(*params.gate_context),
              tape.param(*params.gate_bias))
      .fused;
}

template struct LocalParams<float>;
template struct LocalParams<double>;
template Var refine_retweets<float>(Tape<float>&, Var, const LocalParams<float>&, KeyMask, AttentionOptions);
template Var refine_retweets<double>(Tape<double>&, Var, const LocalParams<double>&, KeyMask, AttentionOptions);
template CrossAttention cross_attend<float>(Tape<float>&, Var, Var, Var, KeyMask);
template CrossAttention cross_attend<double>(Tape<double>&, Var, Var, Var, KeyMask);
template Fusion fuse<float>(Tape<float>&, Var, Var, Var, Var, Var);
template Fusion fuse<double>(Tape<double>&, Var, Var, Var, Var, Var);
template Var encode_local<float>(Tape<float>&, Var, Var, const LocalParams<float>&, KeyMask, AttentionOptions);
template Var encode_local<double>(Tape<double>&, Var, Var, const LocalParams<double>&, KeyMask, AttentionOptions);

}  // namespace glan
