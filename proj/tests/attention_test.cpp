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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "glan/errors.hpp"
#include "glan/model/attention.hpp"
#include "glan/numerics/grad_check.hpp"
#include "glan/numerics/ops.hpp"
#include "support.hpp"

using namespace glan;
using testing_support::max_abs_diff;
using testing_support::to_mat;
using testing_support::to_tensor;

namespace {

oracle::Mat identity(std::size_t n) {
  oracle::Mat m = oracle::zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

MultiHeadParams<double> random_params(ParamStore<double>& store, std::size_t d, std::size_t h, std::uint64_t seed) {
  Rng rng(seed);
  return MultiHeadParams<double>::create(store, "mha", d, h, 0.8, rng);
}

}  // namespace

TEST(ScaledDotAttention, SingleKeyReturnsItsValue) {
  std::mt19937_64 gen(1);
  Tape<double> t(false);
  const auto q = oracle::random(3, 4, gen), k = oracle::random(1, 4, gen), v = oracle::random(1, 4, gen);
  const auto out = to_mat(t.value(scaled_dot_attention(t, t.constant(to_tensor<double>(q)),
                                                        t.constant(to_tensor<double>(k)),
                                                        t.constant(to_tensor<double>(v)))));
  for (const auto& row : out)
    for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(row[c], v[0][c], 1e-15);
}

TEST(ScaledDotAttention, IdenticalKeysAverageValues) {
  std::mt19937_64 gen(2);
  Tape<double> t(false);
  const auto q = oracle::random(2, 3, gen), v = oracle::random(4, 3, gen);
  oracle::Mat k(4, oracle::random(1, 3, gen)[0]);
  const auto out = to_mat(t.value(scaled_dot_attention(t, t.constant(to_tensor<double>(q)),
                                                        t.constant(to_tensor<double>(k)),
                                                        t.constant(to_tensor<double>(v)))));
  for (std::size_t c = 0; c < 3; ++c) {
    const double mean = (v[0][c] + v[1][c] + v[2][c] + v[3][c]) / 4;
    EXPECT_NEAR(out[0][c], mean, 1e-12);
    EXPECT_NEAR(out[1][c], mean, 1e-12);
  }
}

TEST(ScaledDotAttention, IdentityExample) {
  Tape<double> t(false);
  const Var i2 = t.constant(to_tensor<double>(identity(2)));
  const auto& out = t.value(scaled_dot_attention(t, i2, i2, i2));
  EXPECT_NEAR(out(0, 0), 0.6698, 5e-5);
  EXPECT_NEAR(out(0, 1), 0.3302, 5e-5);
  const double e = std::exp(1 / std::sqrt(2.0));
  EXPECT_NEAR(out(0, 0), e / (e + 1), 1e-15);
}

TEST(ScaledDotAttention, EmptyKeysAndShapeErrors) {
  Tape<double> t(false);
  const Var q = t.constant(Tensor<double>({1, 2}));
  EXPECT_THROW(scaled_dot_attention(t, q, t.constant(Tensor<double>({0, 2})), t.constant(Tensor<double>({0, 2}))),
               DomainError);
  EXPECT_THROW(scaled_dot_attention(t, q, t.constant(Tensor<double>({2, 2})), t.constant(Tensor<double>({3, 2}))),
               DomainError);
}

TEST(ScaledDotAttention, PropertyWeightsSumToOneAndOutputIsConvex) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nq = 1 + gen() % 4, nk = 1 + gen() % 6, dk = 1 + gen() % 5;
    const auto q = oracle::random(nq, dk, gen, 3), k = oracle::random(nk, dk, gen, 3), v = oracle::random(nk, dk, gen);
    Tape<double> t(false);
    const auto& w = t.value(attention_weights(t, t.constant(to_tensor<double>(q)), t.constant(to_tensor<double>(k)),
                                              {}, 1 / std::sqrt(double(dk))));
    for (std::size_t i = 0; i < nq; ++i) {
      double total = 0;
      for (std::size_t j = 0; j < nk; ++j) {
        EXPECT_GE(w(i, j), 0.0);
        total += w(i, j);
      }
      EXPECT_NEAR(total, 1.0, 1e-6);
    }
    const auto out = to_mat(t.value(scaled_dot_attention(t, t.constant(to_tensor<double>(q)),
                                                          t.constant(to_tensor<double>(k)),
                                                          t.constant(to_tensor<double>(v)))));
    EXPECT_LE(max_abs_diff(out, oracle::attention(q, k, v, 1 / std::sqrt(double(dk)))), 1e-12);
    for (std::size_t c = 0; c < dk; ++c) {
      double lo = 1e9, hi = -1e9;
      for (const auto& row : v) lo = std::min(lo, row[c]), hi = std::max(hi, row[c]);
      for (const auto& row : out) {
        EXPECT_GE(row[c], lo - 1e-12);
        EXPECT_LE(row[c], hi + 1e-12);
      }
    }
  }
}

TEST(ScaledDotAttention, MaskedKeysGetExactlyZeroWeight) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nk = 2 + gen() % 5;
    const auto q = oracle::random(2, 3, gen, 2), k = oracle::random(nk, 3, gen, 2), v = oracle::random(nk, 3, gen);
    std::vector<unsigned char> keep(nk, 1);
    for (std::size_t j = 1; j < nk; ++j) keep[j] = gen() % 2;
    Tape<double> t(false);
    const Var qv = t.constant(to_tensor<double>(q)), kv = t.constant(to_tensor<double>(k));
    const auto& w = t.value(attention_weights(t, qv, kv, keep, 0.5));
    oracle::Mat kept_k, kept_v;
    for (std::size_t j = 0; j < nk; ++j) {
      if (!keep[j]) {
        EXPECT_EQ(w(0, j), 0.0);
        EXPECT_EQ(w(1, j), 0.0);
      } else {
        kept_k.push_back(k[j]);
        kept_v.push_back(v[j]);
      }
    }
    const auto out = to_mat(t.value(
        scaled_dot_attention(t, qv, kv, t.constant(to_tensor<double>(v)), keep, std::optional<double>(0.5))));
    EXPECT_LE(max_abs_diff(out, oracle::attention(q, kept_k, kept_v, 0.5)), 1e-12);
  }
}

TEST(MultiHead, SingleHeadWithIdentityMatchesScaledDot) {
  ParamStore<double> store;
  auto p = random_params(store, 4, 1, 5);
  for (auto* w : {p.wq, p.wk, p.wv, p.wo}) w->value = to_tensor<double>(identity(4));
  std::mt19937_64 gen(5);
  const auto q = oracle::random(3, 4, gen), k = oracle::random(5, 4, gen);
  Tape<double> t(false);
  const Var qv = t.constant(to_tensor<double>(q)), kv = t.constant(to_tensor<double>(k));
  const auto a = to_mat(t.value(multi_head_attention(t, qv, kv, kv, p)));
  const auto b = to_mat(t.value(scaled_dot_attention(t, qv, kv, kv)));
  EXPECT_LE(max_abs_diff(a, b), 1e-14);
}

TEST(MultiHead, MatchesPerHeadCompositionOracle) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t h = trial % 3 == 0 ? 1 : (trial % 3 == 1 ? 2 : 4);
    const std::size_t d = h * (1 + gen() % 3);
    ParamStore<double> store;
    auto p = random_params(store, d, h, gen());
    const auto q = oracle::random(1 + gen() % 4, d, gen), k = oracle::random(1 + gen() % 5, d, gen);
    const auto v = oracle::random(k.size(), d, gen);
    Tape<double> t(false);
    const auto out = to_mat(t.value(multi_head_attention(t, t.constant(to_tensor<double>(q)),
                                                         t.constant(to_tensor<double>(k)),
                                                         t.constant(to_tensor<double>(v)), p)));
    const auto expected = oracle::multi_head(q, k, v, to_mat(p.wq->value), to_mat(p.wk->value),
                                             to_mat(p.wv->value), to_mat(p.wo->value), h);
    EXPECT_LE(max_abs_diff(out, expected), 1e-6);
  }
}

TEST(MultiHead, FullDimensionScaleSwitch) {
  ParamStore<double> store;
  auto p = random_params(store, 4, 2, 7);
  std::mt19937_64 gen(7);
  const auto q = oracle::random(2, 4, gen, 2), k = oracle::random(3, 4, gen, 2);
  Tape<double> t(false);
  const Var qv = t.constant(to_tensor<double>(q)), kv = t.constant(to_tensor<double>(k));
  const auto per_head = to_mat(t.value(multi_head_attention(t, qv, kv, kv, p)));
  const auto full = to_mat(t.value(multi_head_attention(t, qv, kv, kv, p, {}, AttentionOptions{false})));
  EXPECT_GT(max_abs_diff(per_head, full), 1e-6);
  // the full-dimension variant is the per-head oracle with a 1/sqrt(d) scale
  const auto wq = to_mat(p.wq->value), wk = to_mat(p.wk->value), wv = to_mat(p.wv->value);
  oracle::Mat z = oracle::zeros(2, 4);
  for (std::size_t head = 0; head < 2; ++head) {
    const auto zi = oracle::attention(oracle::mul(q, oracle::cols(wq, head * 2, 2)), oracle::mul(k, oracle::cols(wk, head * 2, 2)),
                                      oracle::mul(k, oracle::cols(wv, head * 2, 2)), 0.5);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t c = 0; c < 2; ++c) z[i][head * 2 + c] = zi[i][c];
  }
  EXPECT_LE(max_abs_diff(full, oracle::mul(z, to_mat(p.wo->value))), 1e-12);
}

TEST(MultiHead, EightHeadsShape) {
  ParamStore<double> store;
  auto p = random_params(store, 8, 8, 8);
  std::mt19937_64 gen(8);
  Tape<double> t(false);
  const Var q = t.constant(to_tensor<double>(oracle::random(3, 8, gen)));
  const Var k = t.constant(to_tensor<double>(oracle::random(5, 8, gen)));
  const auto& out = t.value(multi_head_attention(t, q, k, k, p));
  EXPECT_EQ(out.rows(), 3u);
  EXPECT_EQ(out.cols(), 8u);
}

TEST(MultiHead, IndivisibleHeadsIsConfigError) {
  ParamStore<double> store;
  Rng rng(1);
  EXPECT_THROW(MultiHeadParams<double>::create(store, "x", 6, 4, 0.1, rng), ConfigError);
  EXPECT_THROW(MultiHeadParams<double>::create(store, "y", 6, 0, 0.1, rng), ConfigError);
}

TEST(MultiHead, PropertyKeyValuePermutationInvariance) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    ParamStore<double> store;
    auto p = random_params(store, 6, 3, gen());
    const std::size_t nk = 2 + gen() % 6;
    const auto q = oracle::random(3, 6, gen), k = oracle::random(nk, 6, gen), v = oracle::random(nk, 6, gen);
    std::vector<std::size_t> perm(nk);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    oracle::Mat kp, vp;
    for (std::size_t j : perm) kp.push_back(k[j]), vp.push_back(v[j]);
    Tape<double> t(false);
    const Var qv = t.constant(to_tensor<double>(q));
    const auto a = to_mat(t.value(
        multi_head_attention(t, qv, t.constant(to_tensor<double>(k)), t.constant(to_tensor<double>(v)), p)));
    const auto b = to_mat(t.value(
        multi_head_attention(t, qv, t.constant(to_tensor<double>(kp)), t.constant(to_tensor<double>(vp)), p)));
    EXPECT_LE(max_abs_diff(a, b), 1e-12);
  }
}

TEST(MultiHead, GradCheckOnAllProjections) {
  ParamStore<double> store;
  auto p = random_params(store, 4, 2, 10);
  Rng rng(10);
  auto& x = store.add("x", uniform_tensor<double>({3, 4}, 1.0, rng));
  auto& y = store.add("y", uniform_tensor<double>({2, 4}, 1.0, rng));
  const Tensor<double> probe = uniform_tensor<double>({4, 1}, 1.0, rng);
  const std::vector<unsigned char> keep{1, 0, 1};
  auto loss = [&](Tape<double>& t) {
    const Var xv = t.param(x);
    Var self = multi_head_attention(t, xv, xv, xv, p, keep);
    Var cross = multi_head_attention(t, t.param(y), xv, xv, p);
    Var both = ops::concat_rows<double>(t, std::vector<Var>{self, cross});
    return ops::sum(t, ops::sigmoid(t, ops::matmul(t, both, t.constant(probe))));
  };
  auto params = store.all();
  const GradCheckReport report = grad_check(loss, params);
  EXPECT_TRUE(report.passed()) << report.max_rel_error << " at " << report.worst_param;
  EXPECT_EQ(report.checked, 4u * 16 + 12 + 8);
}
