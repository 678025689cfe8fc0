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
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "glan/numerics/activations.hpp"
#include "glan/numerics/adam.hpp"
#include "glan/numerics/checkpoint.hpp"
#include "glan/numerics/grad_check.hpp"
#include "glan/numerics/init.hpp"
#include "glan/numerics/kernels.hpp"
#include "glan/numerics/linalg.hpp"
#include "glan/numerics/ops.hpp"
#include "support.hpp"

using namespace glan;
using testing_support::to_mat;
using testing_support::to_tensor;

namespace {

// --- SIMD kernels -----------------------------------------------------------

template <typename T>
std::vector<T> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<T> v(n);
  for (T& x : v) x = T(u(rng));
  return v;
}

template <typename T>
void check_variant_matches_scalar(T (*dot)(const T*, const T*, std::size_t),
                                  void (*axpy)(T, const T*, T*, std::size_t), double tol) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (std::size_t offset : {0, 1, 3}) {
      auto a = random_vec<T>(n + offset, rng);
      auto b = random_vec<T>(n + offset, rng);
      const double ref = double(simd::scalar::dot(a.data() + offset, b.data() + offset, n));
      const double got = double(dot(a.data() + offset, b.data() + offset, n));
      EXPECT_NEAR(got, ref, tol * (1 + double(n))) << "dot n=" << n << " offset=" << offset;

      auto y_ref = b, y_got = b;
      simd::scalar::axpy(T(0.37), a.data() + offset, y_ref.data() + offset, n);
      axpy(T(0.37), a.data() + offset, y_got.data() + offset, n);
      for (std::size_t i = 0; i < y_ref.size(); ++i) EXPECT_NEAR(double(y_got[i]), double(y_ref[i]), tol);
    }
  }
}

TEST(Kernels, Avx2MatchesScalar) {
  if (!simd::avx2::available()) GTEST_SKIP() << "no AVX2 on this CPU";
  check_variant_matches_scalar<float>(simd::avx2::dot, simd::avx2::axpy, 1e-6);
  check_variant_matches_scalar<double>(simd::avx2::dot, simd::avx2::axpy, 1e-14);
}

TEST(Kernels, NeonMatchesScalar) {
  if (!simd::neon::available()) GTEST_SKIP() << "no NEON on this CPU";
  check_variant_matches_scalar<float>(simd::neon::dot, simd::neon::axpy, 1e-6);
  check_variant_matches_scalar<double>(simd::neon::dot, simd::neon::axpy, 1e-14);
}

TEST(Kernels, DispatchSwitchesVariant) {
  const simd::Isa before = simd::active_isa();
  EXPECT_TRUE(simd::isa_supported(simd::Isa::kScalar));
  simd::set_isa(simd::Isa::kScalar);
  EXPECT_EQ(simd::active_isa(), simd::Isa::kScalar);
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_EQ(simd::dot(a.data(), b.data(), 3), 32.0);
  for (simd::Isa isa : {simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (!simd::isa_supported(isa)) {
      EXPECT_THROW(simd::set_isa(isa), std::exception);
    }
  }
  simd::set_isa(before);
}

TEST(Kernels, GemmMatchesOracleUnderEveryVariant) {
  std::mt19937_64 rng(9);
  const simd::Isa before = simd::active_isa();
  for (simd::Isa isa : {simd::Isa::kScalar, simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (!simd::isa_supported(isa)) continue;
    simd::set_isa(isa);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t m = 1 + rng() % 7, k = 1 + rng() % 19, n = 1 + rng() % 13;
      const auto A = oracle::random(m, k, rng), B = oracle::random(k, n, rng);
      const auto ref = oracle::mul(A, B);
      using linalg::Trans;
      const auto nn = linalg::matmul(to_tensor<double>(A), to_tensor<double>(B));
      const auto tn = linalg::matmul(to_tensor<double>(oracle::transpose(A)), to_tensor<double>(B), Trans::kYes);
      const auto nt = linalg::matmul(to_tensor<double>(A), to_tensor<double>(oracle::transpose(B)), Trans::kNo,
                                     Trans::kYes);
      const auto tt = linalg::matmul(to_tensor<double>(oracle::transpose(A)),
                                     to_tensor<double>(oracle::transpose(B)), Trans::kYes, Trans::kYes);
      for (const auto* got : {&nn, &tn, &nt, &tt}) {
        EXPECT_LT(testing_support::max_abs_diff(to_mat(*got), ref), 1e-12) << simd::isa_name(isa);
      }
    }
  }
  simd::set_isa(before);
}

TEST(Kernels, GemmRowsIndependentOfBatch) {
  std::mt19937_64 rng(10);
  const auto A = oracle::random(9, 17, rng), B = oracle::random(17, 5, rng);
  const auto full = linalg::matmul(to_tensor<float>(A), to_tensor<float>(B));
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto one = linalg::matmul(to_tensor<float>(oracle::Mat{A[i]}), to_tensor<float>(B));
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(one(0, j), full(i, j));
  }
}

// --- tensors and activations ------------------------------------------------

TEST(Tensor, ShapeMustMatchData) {
  EXPECT_THROW(Tensor<double>({2, 3}, std::vector<double>(5)), DomainError);
  EXPECT_THROW(Tensor<double>({0, 3}), DomainError);
  Tensor<double> t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
}

TEST(Softmax, Examples) {
  auto a = softmax<double>(std::vector<double>{0, 0});
  EXPECT_DOUBLE_EQ(a[0], 0.5);
  EXPECT_DOUBLE_EQ(a[1], 0.5);
  auto b = softmax<double>(std::vector<double>{std::log(2.0), 0});
  EXPECT_NEAR(b[0], 2.0 / 3, 1e-15);
  EXPECT_NEAR(b[1], 1.0 / 3, 1e-15);
  const std::vector<double> v{1, 2, 3};
  const auto ref = oracle::softmax(v);
  auto c = softmax<double>(v);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(c[i], ref[i], 1e-15);
  EXPECT_NEAR(c[0], 0.09003, 1e-5);
  EXPECT_NEAR(c[1], 0.24473, 1e-5);
  EXPECT_NEAR(c[2], 0.66524, 1e-5);
  EXPECT_THROW(softmax<double>(std::vector<double>{}), DomainError);
}

TEST(Softmax, SumsToOneAndShiftInvariant) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    const auto p = softmax<double>(v);
    double total = 0;
    for (double x : p) {
      EXPECT_GT(x, 0.0);
      EXPECT_LE(x, 1.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-6);
    const double shift = u(rng);
    for (double& x : v) x += shift;
    const auto q = softmax<double>(v);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(Softmax, LargeLogitsStayFinite) {
  auto p = softmax<float>(std::vector<float>{1000.f, 999.f, -1000.f});
  for (float x : p) EXPECT_TRUE(std::isfinite(x));
}

TEST(Softmax, MaskedEntriesGetZero) {
  std::vector<double> row{1, 5, 2};
  const unsigned char keep[] = {1, 0, 1};
  softmax_inplace<double>(row, keep);
  EXPECT_EQ(row[1], 0.0);
  EXPECT_NEAR(row[0] + row[2], 1.0, 1e-15);
  std::vector<double> none{1, 2};
  const unsigned char drop[] = {0, 0};
  EXPECT_THROW(softmax_inplace<double>(none, drop), DomainError);
}

TEST(Activations, Examples) {
  EXPECT_EQ(leaky_relu(3.0), 3.0);
  EXPECT_DOUBLE_EQ(leaky_relu(-1.0), -0.2);
  EXPECT_EQ(leaky_relu(0.0), 0.0);
  EXPECT_EQ(elu(0.0), 0.0);
  EXPECT_EQ(elu(1.0), 1.0);
  EXPECT_NEAR(elu(-1.0), std::exp(-1.0) - 1, 1e-15);
  EXPECT_NEAR(elu(-1.0), -0.632121, 1e-6);
  EXPECT_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(20.0), 1 / (1 + std::exp(-20.0)), 1e-15);
  EXPECT_NEAR(sigmoid(20.0), 0.9999999979, 1e-10);
  EXPECT_NEAR(sigmoid(-20.0), 1 - sigmoid(20.0), 1e-15);
}

TEST(Activations, MonotoneAndSigmoidSymmetric) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 2000; ++trial) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(leaky_relu(a), leaky_relu(b));
    EXPECT_LE(elu(a), elu(b));
    EXPECT_LE(sigmoid(a), sigmoid(b));
    EXPECT_LE(relu(a), relu(b));
    EXPECT_NEAR(sigmoid(-a), 1 - sigmoid(a), 1e-12);
    EXPECT_GE(sigmoid(a), 0.0);
    EXPECT_LE(sigmoid(a), 1.0);
  }
}

// --- gradient checks of every tape operation --------------------------------

// Reduces an arbitrary output to a scalar through a fixed random linear map
// and a sigmoid, so that no gradient vanishes by symmetry.
Var probe(Tape<double>& t, Var out, std::uint64_t seed = 77) {
  Rng rng(seed);
  const auto& y = t.value(out);
  Var c = t.constant(uniform_tensor<double>({y.cols(), 2}, 1.0, rng));
  return ops::sum(t, ops::sigmoid(t, ops::matmul(t, out, c)));
}

struct OpCase {
  ParamStore<double> store;
  std::vector<Parameter<double>*> params;

  Parameter<double>& add(const std::string& name, std::size_t r, std::size_t c, Rng& rng, double range = 1.0) {
    auto& p = store.add(name, uniform_tensor<double>({r, c}, range, rng));
    params.push_back(&p);
    return p;
  }
  void expect_pass(const LossBuilder& loss, const char* what) {
    const GradCheckReport report = grad_check(loss, params);
    EXPECT_TRUE(report.passed()) << what << ": " << report.max_rel_error << " at " << report.worst_param << "["
                                 << report.worst_index << "] " << report.message;
    EXPECT_GT(report.checked, 0u) << what;
  }
};

TEST(GradCheck, EveryOperationOnRandomShapes) {
  Rng rng(123);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 5, k = 2 + rng() % 4;
    OpCase c;
    auto& a = c.add("a", n, k, rng);
    auto& b = c.add("b", k, m, rng);
    auto& bt = c.add("bt", m, k, rng);
    auto& a2 = c.add("a2", n, k, rng);
    auto& row = c.add("row", 1, k, rng);
    auto& s = c.add("s", 1, 1, rng);
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::matmul(t, t.param(a), t.param(b))); }, "matmul");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::matmul_nt(t, t.param(a), t.param(bt))); }, "matmul_nt");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::transpose(t, t.param(a))); }, "transpose");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::add(t, t.param(a), t.param(a2))); }, "add");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::sub(t, t.param(a), t.param(a2))); }, "sub");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::add_row(t, t.param(a), t.param(row))); }, "add_row");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::add_scalar(t, t.param(a), t.param(s))); }, "add_scalar");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::scale(t, t.param(a), -1.7)); }, "scale");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::scale_by(t, t.param(s), t.param(a))); }, "scale_by");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::lerp(t, t.param(a), t.param(a2), t.param(s))); }, "lerp");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::relu(t, t.param(a))); }, "relu");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::leaky_relu(t, t.param(a))); }, "leaky_relu");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::elu(t, t.param(a))); }, "elu");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::sigmoid(t, t.param(a))); }, "sigmoid");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::softmax_rows(t, t.param(a))); }, "softmax_rows");
    std::vector<unsigned char> keep(k, 1);
    keep[0] = 0;
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::softmax_rows(t, t.param(a), keep)); }, "masked softmax");
    c.expect_pass(
        [&](Tape<double>& t) {
          const Var parts[] = {t.param(a), t.param(a2), t.param(a)};
          return probe(t, ops::concat_cols<double>(t, parts));
        },
        "concat_cols");
    c.expect_pass(
        [&](Tape<double>& t) {
          const Var parts[] = {t.param(a), t.param(row), t.param(a2)};
          return probe(t, ops::concat_rows<double>(t, parts));
        },
        "concat_rows");
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::slice_cols(t, t.param(a), 1, k - 1)); }, "slice_cols");
    const std::vector<int> idx{0, -1, int(n - 1), 0};
    c.expect_pass([&](Tape<double>& t) { return probe(t, ops::gather_rows(t, t.param(a), idx)); }, "gather_rows");
    c.expect_pass([&](Tape<double>& t) { return ops::sigmoid(t, ops::sum(t, t.param(a))); }, "sum");
  }
}

TEST(GradCheck, SegmentOperations) {
  Rng rng(7);
  OpCase c;
  const std::vector<int> offsets{0, 2, 3, 7};
  auto& logits = c.add("logits", 7, 2, rng, 2.0);
  auto& values = c.add("values", 7, 6, rng);
  c.expect_pass([&](Tape<double>& t) { return probe(t, ops::segment_softmax(t, t.param(logits), offsets)); },
                "segment_softmax");
  c.expect_pass(
      [&](Tape<double>& t) {
        const Var w = ops::segment_softmax(t, t.param(logits), offsets);
        return probe(t, ops::segment_weighted_sum(t, w, t.param(values), offsets));
      },
      "segment_weighted_sum");
}

TEST(GradCheck, ConvMaxPoolAndLoss) {
  Rng rng(8);
  OpCase c;
  const std::size_t L = 6, d = 3, F = 4, h = 3;
  auto& x = c.add("x", 2 * L, d, rng);
  auto& w = c.add("w", F, h * d, rng);
  auto& b = c.add("b", 1, F, rng);
  c.expect_pass([&](Tape<double>& t) { return probe(t, ops::conv_maxpool(t, t.param(x), L, t.param(w), t.param(b))); },
                "conv_maxpool");
  auto& logits = c.add("logits", 3, 4, rng);
  const std::vector<int> gold{1, 3, 0};
  c.expect_pass([&](Tape<double>& t) { return ops::nll_loss(t, ops::softmax_rows(t, t.param(logits)), gold); },
                "nll_loss");
}

TEST(GradCheck, QuadraticExample) {
  ParamStore<double> store;
  auto& p = store.add("p", Tensor<double>::row({1, 2}));
  std::vector<Parameter<double>*> params{&p};
  const auto report = grad_check(
      [&](Tape<double>& t) {
        const Var v = t.param(p);
        return ops::sum(t, ops::matmul_nt(t, v, v));
      },
      params);
  EXPECT_TRUE(report.passed());
  EXPECT_LT(report.max_rel_error, 1e-8);
  EXPECT_DOUBLE_EQ(p.grad[0], 2.0);
  EXPECT_DOUBLE_EQ(p.grad[1], 4.0);
}

TEST(GradCheck, SoftmaxCrossEntropyToy) {
  ParamStore<double> store;
  auto& z = store.add("z", Tensor<double>::row({0.3, -1.2, 2.0}));
  std::vector<Parameter<double>*> params{&z};
  const std::vector<int> gold{1};
  const auto report = grad_check(
      [&](Tape<double>& t) { return ops::nll_loss(t, ops::softmax_rows(t, t.param(z)), gold); }, params, 1e-5);
  EXPECT_TRUE(report.passed(1e-4));
  // d/dz of -log softmax(z)[g] is p - onehot(g).
  const auto p = oracle::softmax({0.3, -1.2, 2.0});
  EXPECT_NEAR(z.grad[0], p[0], 1e-12);
  EXPECT_NEAR(z.grad[1], p[1] - 1, 1e-12);
  EXPECT_NEAR(z.grad[2], p[2], 1e-12);
}

TEST(GradCheck, KinkAtZeroIsFlagged) {
  ParamStore<double> store;
  auto& p = store.add("p", Tensor<double>::row({0.0, 1.0}));
  std::vector<Parameter<double>*> params{&p};
  const auto report =
      grad_check([&](Tape<double>& t) { return ops::sum(t, ops::leaky_relu(t, t.param(p))); }, params);
  EXPECT_EQ(report.flagged, 1u);
  EXPECT_EQ(report.checked, 1u);
  EXPECT_TRUE(report.passed());
}

TEST(GradCheck, NonDeterministicLossIsInvalid) {
  ParamStore<double> store;
  auto& p = store.add("p", Tensor<double>::row({1.0}));
  std::vector<Parameter<double>*> params{&p};
  int calls = 0;
  const auto report = grad_check(
      [&](Tape<double>& t) { return ops::scale(t, ops::sum(t, t.param(p)), 1.0 + 0.1 * ++calls); }, params);
  EXPECT_FALSE(report.valid);
  EXPECT_FALSE(report.passed());
}

TEST(GradCheck, DetectsAWrongGradient) {
  ParamStore<double> store;
  auto& p = store.add("p", Tensor<double>::row({0.4, -0.3}));
  std::vector<Parameter<double>*> params{&p};
  const auto report = grad_check(
      [&](Tape<double>& t) {
        const Var x = t.param(p);
        Tensor<double> y = t.value(x);
        for (double& v : y.values()) v = v * v;
        const auto out = static_cast<std::uint32_t>(t.size());
        // Deliberately reports d(x^2)/dx as x instead of 2x.
        const Var sq = t.push(std::move(y), true, [x, out](Tape<double>& tp) {
          for (std::size_t i = 0; i < tp.value(x).size(); ++i) tp.grad(x)[i] += tp.grad(Var{out})[i] * tp.value(x)[i];
        });
        return ops::sum(t, sq);
      },
      params);
  EXPECT_FALSE(report.passed());
}

TEST(GradCheck, RejectsEpsOutsideRange) {
  ParamStore<double> store;
  auto& p = store.add("p", Tensor<double>::row({1.0}));
  std::vector<Parameter<double>*> params{&p};
  auto loss = [&](Tape<double>& t) { return ops::sum(t, t.param(p)); };
  EXPECT_THROW(grad_check(loss, params, 1e-2), DomainError);
  EXPECT_THROW(grad_check(loss, params, 1e-7), DomainError);
}

TEST(Tape, GradientHasParameterShape) {
  Rng rng(4);
  ParamStore<double> store;
  auto& w = store.add("w", uniform_tensor<double>({3, 5}, 1.0, rng));
  Tape<double> t;
  const Var x = t.constant(uniform_tensor<double>({2, 3}, 1.0, rng));
  t.backward(ops::sum(t, ops::matmul(t, x, t.param(w))));
  EXPECT_EQ(w.grad.shape(), w.value.shape());
  EXPECT_THROW(t.backward(ops::matmul(t, x, t.param(w))), DomainError);
}

// --- Adam -------------------------------------------------------------------

TEST(Adam, DefaultHyperparameters) {
  AdamConfig c;
  EXPECT_EQ(c.beta1, 0.9);
  EXPECT_EQ(c.beta2, 0.999);
  EXPECT_EQ(c.lr, 1e-3);
  EXPECT_EQ(c.epsilon, 1e-8);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  Adam<double> adam;
  Tensor<double> p = Tensor<double>::row({0.5, -2.0});
  const Tensor<double> before = p;
  Tensor<double>* values[] = {&p};
  const Tensor<double> grads[] = {Tensor<double>({1, 2})};
  for (int i = 0; i < 5; ++i) adam.step(values, grads);
  EXPECT_EQ(p, before);
  EXPECT_EQ(adam.steps(), 5);
}

TEST(Adam, OneStepHandComputed) {
  Adam<double> adam;
  Tensor<double> p = Tensor<double>::row({0.0});
  Tensor<double>* values[] = {&p};
  const Tensor<double> grads[] = {Tensor<double>::row({1.0})};
  adam.step(values, grads);
  // m_hat = 1, v_hat = 1, update = lr * 1 / (1 + eps).
  EXPECT_NEAR(p[0], -1e-3 / (1 + 1e-8), 1e-15);
  EXPECT_NEAR(p[0], -1e-3, 1e-10);
  EXPECT_EQ(adam.first_moment(0).shape(), p.shape());
  EXPECT_EQ(adam.second_moment(0).shape(), p.shape());
}

TEST(Adam, MatchesReferenceOverSeveralSteps) {
  AdamConfig cfg{0.01, 0.9, 0.999, 1e-8};
  Adam<double> adam(cfg);
  Tensor<double> p = Tensor<double>::row({0.3, -0.7});
  double ref[2] = {0.3, -0.7}, m[2] = {0, 0}, v[2] = {0, 0};
  for (int step = 1; step <= 6; ++step) {
    Tensor<double> g = Tensor<double>::row({std::sin(step * 1.0), std::cos(step * 2.0)});
    Tensor<double>* values[] = {&p};
    adam.step(values, std::span<const Tensor<double>>(&g, 1));
    for (int i = 0; i < 2; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * g[i];
      v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
      const double mh = m[i] / (1 - std::pow(0.9, step)), vh = v[i] / (1 - std::pow(0.999, step));
      ref[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(p[i], ref[i], 1e-14);
    }
  }
}

TEST(Adam, ShapeMismatchIsDomainError) {
  Adam<double> adam;
  Tensor<double> p = Tensor<double>::row({0.0, 1.0});
  Tensor<double>* values[] = {&p};
  const Tensor<double> grads[] = {Tensor<double>::row({1.0})};
  EXPECT_THROW(adam.step(values, grads), DomainError);
}

// --- checkpoints ------------------------------------------------------------

template <typename T>
ParamStore<T> sample_store() {
  Rng rng(31);
  ParamStore<T> s;
  s.add("text.embedding", uniform_tensor<T>({5, 3}, 1.0, rng));
  s.add("global.layer0.a", uniform_tensor<T>({2, 6}, 1.0, rng));
  auto& odd = s.add("odd values", Tensor<T>::row({T(-0.0), std::numeric_limits<T>::denorm_min(),
                                                   std::numeric_limits<T>::max(), T(1) / T(3)}));
  (void)odd;
  return s;
}

template <typename T>
void round_trip() {
  const ParamStore<T> s = sample_store<T>();
  std::stringstream buf;
  checkpoint::write(buf, s);
  const std::string bytes = buf.str();
  const ParamStore<T> back = checkpoint::read<T>(buf);
  ASSERT_EQ(back.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(back[i].name, s[i].name);
    EXPECT_EQ(back[i].value.shape(), s[i].value.shape());
    EXPECT_EQ(std::memcmp(back[i].value.data(), s[i].value.data(), s[i].value.size() * sizeof(T)), 0);
  }
  std::stringstream again;
  checkpoint::write(again, back);
  EXPECT_EQ(again.str(), bytes);
}

TEST(Checkpoint, BitExactRoundTrip32) { round_trip<float>(); }
TEST(Checkpoint, BitExactRoundTrip64) { round_trip<double>(); }

TEST(Checkpoint, HeaderLayout) {
  std::stringstream buf;
  checkpoint::write(buf, sample_store<double>());
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 8), "GLANCKPT");
  std::uint32_t version = 0, precision = 0;
  std::uint64_t count = 0;
  std::memcpy(&version, bytes.data() + 8, 4);
  std::memcpy(&precision, bytes.data() + 12, 4);
  std::memcpy(&count, bytes.data() + 16, 8);
  EXPECT_EQ(version, 1u);
  EXPECT_EQ(precision, 8u);
  EXPECT_EQ(count, 3u);
}

TEST(Checkpoint, RejectsWrongPrecisionAndCorruption) {
  std::stringstream buf;
  checkpoint::write(buf, sample_store<float>());
  const std::string bytes = buf.str();
  {
    std::stringstream in(bytes);
    EXPECT_THROW(checkpoint::read<double>(in), FormatError);
  }
  {
    std::stringstream in(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(checkpoint::read<float>(in), FormatError);
  }
  {
    std::string bad = bytes;
    bad[0] = 'X';
    std::stringstream in(bad);
    EXPECT_THROW(checkpoint::read<float>(in), FormatError);
  }
}

}  // namespace
