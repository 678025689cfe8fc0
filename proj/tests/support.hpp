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

// Brute-force reference implementations used as oracles. They work on plain
// row-major std::vector<double> and share no code with the library.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "glan/numerics/init.hpp"
#include "glan/numerics/tape.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<double>(c, 0.0)); }

inline Mat random(std::size_t r, std::size_t c, std::mt19937_64& rng, double range = 1.0) {
  std::uniform_real_distribution<double> u(-range, range);
  Mat m = zeros(r, c);
  for (auto& row : m)
    for (double& v : row) v = u(rng);
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b[0].size(); ++j)
      for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline std::vector<double> softmax(const std::vector<double>& v) {
  double total = 0;
  std::vector<double> e(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) total += e[i] = std::exp(v[i]);
  for (double& x : e) x /= total;
  return e;
}

inline double leaky(double x) { return x >= 0 ? x : 0.2 * x; }
inline double elu(double x) { return x >= 0 ? x : std::exp(x) - 1; }
inline double sigmoid(double x) { return 1 / (1 + std::exp(-x)); }

inline Mat cols(const Mat& a, std::size_t begin, std::size_t count) {
  Mat out = zeros(a.size(), count);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < count; ++j) out[i][j] = a[i][begin + j];
  return out;
}

// softmax(Q K^T * scale) V, one query row at a time.
inline Mat attention(const Mat& q, const Mat& k, const Mat& v, double scale) {
  Mat out = zeros(q.size(), v[0].size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<double> logits(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) {
      double s = 0;
      for (std::size_t c = 0; c < q[0].size(); ++c) s += q[i][c] * k[j][c];
      logits[j] = s * scale;
    }
    const auto w = softmax(logits);
    for (std::size_t j = 0; j < k.size(); ++j)
      for (std::size_t c = 0; c < v[0].size(); ++c) out[i][c] += w[j] * v[j][c];
  }
  return out;
}

inline Mat multi_head(const Mat& q, const Mat& k, const Mat& v, const Mat& wq, const Mat& wk, const Mat& wv,
                      const Mat& wo, std::size_t heads) {
  const std::size_t d = wq.size(), dk = d / heads;
  Mat z = zeros(q.size(), d);
  for (std::size_t h = 0; h < heads; ++h) {
    const Mat zi = attention(mul(q, cols(wq, h * dk, dk)), mul(k, cols(wk, h * dk, dk)), mul(v, cols(wv, h * dk, dk)),
                             1 / std::sqrt(double(dk)));
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t c = 0; c < dk; ++c) z[i][h * dk + c] = zi[i][c];
  }
  return mul(z, wo);
}

// Graph attention for one center: per head k, softmax over neighbors of
// LeakyReLU(score_k . [center; neighbor]). Returns neighbors x heads.
inline Mat relation_attention(const std::vector<double>& center, const Mat& neighbors, const Mat& score) {
  const std::size_t d = center.size(), heads = score.size();
  Mat w = zeros(neighbors.size(), heads);
  for (std::size_t k = 0; k < heads; ++k) {
    std::vector<double> logits;
    for (const auto& n : neighbors) {
      double s = 0;
      for (std::size_t c = 0; c < d; ++c) s += score[k][c] * center[c] + score[k][d + c] * n[c];
      logits.push_back(leaky(s));
    }
    const auto p = softmax(logits);
    for (std::size_t i = 0; i < neighbors.size(); ++i) w[i][k] = p[i];
  }
  return w;
}

// ELU of the concatenated heads sum_i w[i][k] * (neighbor_i W^k), W^k being
// column block k of W.
inline std::vector<double> aggregate(const Mat& weights, const Mat& neighbors, const Mat& W, std::size_t heads) {
  const std::size_t d = W[0].size(), dk = d / heads;
  std::vector<double> out(d, 0.0);
  for (std::size_t k = 0; k < heads; ++k) {
    const Mat Wk = cols(W, k * dk, dk);
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      const Mat x = mul({neighbors[i]}, Wk);
      for (std::size_t c = 0; c < dk; ++c) out[k * dk + c] += weights[i][k] * x[0][c];
    }
  }
  for (double& v : out) v = elu(v);
  return out;
}

struct Cross {
  std::vector<double> scores;
  std::vector<double> context;
};

// s_j = softmax_j(R_j A m^T), r = sum_j s_j R_j.
inline Cross cross_attend(const std::vector<double>& m, const Mat& R, const Mat& A) {
  const std::size_t d = m.size();
  std::vector<double> logits(R.size(), 0.0);
  for (std::size_t j = 0; j < R.size(); ++j)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) logits[j] += R[j][a] * A[a][b] * m[b];
  Cross out{softmax(logits), std::vector<double>(d, 0.0)};
  for (std::size_t j = 0; j < R.size(); ++j)
    for (std::size_t c = 0; c < d; ++c) out.context[c] += out.scores[j] * R[j][c];
  return out;
}

}  // namespace oracle

namespace testing_support {

template <typename T>
glan::Tensor<T> to_tensor(const oracle::Mat& m) {
  glan::Tensor<T> t({m.size(), m[0].size()});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) t(i, j) = static_cast<T>(m[i][j]);
  return t;
}

template <typename T>
oracle::Mat to_mat(const glan::Tensor<T>& t) {
  oracle::Mat m = oracle::zeros(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t j = 0; j < t.cols(); ++j) m[i][j] = double(t(i, j));
  return m;
}

inline double max_abs_diff(const oracle::Mat& a, const oracle::Mat& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, std::fabs(a[i][j] - b[i][j]));
  return worst;
}

}  // namespace testing_support
