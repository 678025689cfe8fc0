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

#include "glan/numerics/activations.hpp"
#include "glan/numerics/tape.hpp"

// Differentiable tensor operations recorded on a Tape. All operands are
// rank-2; vectors are 1 x n rows unless stated otherwise.
namespace glan::ops {

// Per-column keep flags for softmax/attention keys; empty means keep all.
using KeyMask = std::span<const unsigned char>;

template <typename T> Var matmul(Tape<T>& t, Var a, Var b);     // A B
template <typename T> Var matmul_nt(Tape<T>& t, Var a, Var b);  // A B^T
template <typename T> Var transpose(Tape<T>& t, Var a);

template <typename T> Var add(Tape<T>& t, Var a, Var b);
template <typename T> Var sub(Tape<T>& t, Var a, Var b);
// A + b with b a 1 x n row broadcast over the rows of A.
template <typename T> Var add_row(Tape<T>& t, Var a, Var b);
// A + s with s a 1 x 1 scalar broadcast over every entry.
template <typename T> Var add_scalar(Tape<T>& t, Var a, Var s);
template <typename T> Var scale(Tape<T>& t, Var a, T factor);
// s * A with s a 1 x 1 tensor on the tape.
template <typename T> Var scale_by(Tape<T>& t, Var s, Var a);
// a + s (b - a) with a 1 x 1 s; stays inside [min(a,b), max(a,b)] for s in [0,1]
template <typename T> Var lerp(Tape<T>& t, Var a, Var b, Var s);

template <typename T> Var relu(Tape<T>& t, Var a);
template <typename T> Var leaky_relu(Tape<T>& t, Var a, T slope = T(kLeakySlope));
template <typename T> Var elu(Tape<T>& t, Var a);
template <typename T> Var sigmoid(Tape<T>& t, Var a);

// Row-wise softmax; masked columns receive exactly zero weight.
template <typename T> Var softmax_rows(Tape<T>& t, Var a, KeyMask mask = {});

template <typename T> Var concat_cols(Tape<T>& t, std::span<const Var> parts);
template <typename T> Var concat_rows(Tape<T>& t, std::span<const Var> parts);
template <typename T> Var slice_cols(Tape<T>& t, Var a, std::size_t begin, std::size_t count);
// Row i of the result is row idx[i] of A, or zeros when idx[i] < 0.
template <typename T> Var gather_rows(Tape<T>& t, Var a, std::span<const int> idx);

template <typename T> Var sum(Tape<T>& t, Var a);

// Softmax of each column of an E x K logit matrix within every segment
// [offsets[s], offsets[s+1]). Segments must be non-empty.
template <typename T>
Var segment_softmax(Tape<T>& t, Var logits, std::span<const int> offsets);

// out[s, block k] = sum_{e in segment s} w[e, k] * y[e, block k], where the
// D columns of y split into K equal blocks and w is E x K.
template <typename T>
Var segment_weighted_sum(Tape<T>& t, Var weights, Var values, std::span<const int> offsets);

// Width-h convolution over N stacked L x d token matrices (X is N*L x d),
// ReLU, then max over the L-h+1 window positions. W is F x (h*d) with each
// filter laid out window-row-major, b is 1 x F. Output is N x F.
template <typename T>
Var conv_maxpool(Tape<T>& t, Var x, std::size_t length, Var w, Var b);

// Mean (or sum) over rows of -log max(P[i, gold[i]], 1e-12).
template <typename T>
Var nll_loss(Tape<T>& t, Var probs, std::span<const int> gold, bool mean = true);

}  // namespace glan::ops
