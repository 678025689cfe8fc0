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

#include "glan/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "glan/numerics/kernels.hpp"
#include "glan/numerics/linalg.hpp"

namespace glan::ops {

using linalg::Trans;

namespace {

template <typename T>
void require_rank2(const Tensor<T>& x, const char* op) {
  if (x.rank() != 2) throw DomainError(std::string(op) + ": expected a rank-2 operand");
}

template <typename T>
void require_same(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DomainError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                      shape_string(b.shape()));
  }
}

// FNV-style fold of a sign pattern into one value for Tape::note_branch.
struct BranchHash {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void add(std::uint64_t v) { h = (h ^ v) * 0x100000001b3ULL; }
};

// Elementwise map; deriv(x, y) is the local derivative at input x with
// output y.
template <typename T, typename Fwd, typename Deriv>
Var elementwise(Tape<T>& t, Var a, Fwd fwd, Deriv deriv, bool kinked) {
  const Tensor<T>& x = t.value(a);
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = fwd(x[i]);
  if (kinked && t.tracking_branches()) {
    BranchHash bh;
    for (std::size_t i = 0; i < x.size(); ++i) bh.add(x[i] > T(0) ? 1 : (x[i] < T(0) ? 2 : 3));
    t.note_branch(bh.h);
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a), [a, out, deriv](Tape<T>& tp) {
    const Tensor<T>& x = tp.value(a);
    const Tensor<T>& y = tp.value(Var{out});
    const Tensor<T>& g = tp.grad(Var{out});
    Tensor<T>& ga = tp.grad(a);
    for (std::size_t i = 0; i < x.size(); ++i) ga[i] += g[i] * deriv(x[i], y[i]);
  });
}

}  // namespace

template <typename T>
Var relu(Tape<T>& t, Var a) {
  return elementwise(
      t, a, [](T v) { return glan::relu(v); }, [](T v, T) { return v > T(0) ? T(1) : T(0); }, true);
}

template <typename T>
Var elu(Tape<T>& t, Var a) {
  return elementwise(
      t, a, [](T v) { return glan::elu(v); }, [](T v, T y) { return v >= T(0) ? T(1) : y + T(1); },
      false);
}

template <typename T>
Var sigmoid(Tape<T>& t, Var a) {
  return elementwise(
      t, a, [](T v) { return glan::sigmoid(v); }, [](T, T y) { return y * (T(1) - y); }, false);
}

template <typename T>
Var leaky_relu(Tape<T>& t, Var a, T slope) {
  return elementwise(
      t, a, [slope](T v) { return glan::leaky_relu(v, slope); },
      [slope](T v, T) { return v >= T(0) ? T(1) : slope; }, true);
}

template <typename T>
Var matmul(Tape<T>& t, Var a, Var b) {
  const Tensor<T>& A = t.value(a);
  const Tensor<T>& B = t.value(b);
  require_rank2(A, "matmul");
  require_rank2(B, "matmul");
  Tensor<T> C = linalg::matmul(A, B);
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(C), t.needs_grad(a) || t.needs_grad(b), [a, b, out](Tape<T>& tp) {
    const Tensor<T>& A = tp.value(a);
    const Tensor<T>& B = tp.value(b);
    const Tensor<T>& G = tp.grad(Var{out});
    const std::size_t m = A.rows(), k = A.cols(), n = B.cols();
    if (tp.needs_grad(a)) linalg::gemm_acc(Trans::kNo, Trans::kYes, m, k, n, G.data(), B.data(), tp.grad(a).data());
    if (tp.needs_grad(b)) linalg::gemm_acc(Trans::kYes, Trans::kNo, k, n, m, A.data(), G.data(), tp.grad(b).data());
  });
}

template <typename T>
Var matmul_nt(Tape<T>& t, Var a, Var b) {
  const Tensor<T>& A = t.value(a);
  const Tensor<T>& B = t.value(b);
  require_rank2(A, "matmul_nt");
  require_rank2(B, "matmul_nt");
  Tensor<T> C = linalg::matmul(A, B, Trans::kNo, Trans::kYes);
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(C), t.needs_grad(a) || t.needs_grad(b), [a, b, out](Tape<T>& tp) {
    const Tensor<T>& A = tp.value(a);
    const Tensor<T>& B = tp.value(b);
    const Tensor<T>& G = tp.grad(Var{out});
    const std::size_t m = A.rows(), k = A.cols(), n = B.rows();
    if (tp.needs_grad(a)) linalg::gemm_acc(Trans::kNo, Trans::kNo, m, k, n, G.data(), B.data(), tp.grad(a).data());
    if (tp.needs_grad(b)) linalg::gemm_acc(Trans::kYes, Trans::kNo, n, k, m, G.data(), A.data(), tp.grad(b).data());
  });
}

template <typename T>
Var transpose(Tape<T>& t, Var a) {
  const Tensor<T>& A = t.value(a);
  require_rank2(A, "transpose");
  Tensor<T> y({A.cols(), A.rows()});
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) y(j, i) = A(i, j);
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a), [a, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    Tensor<T>& ga = tp.grad(a);
    for (std::size_t i = 0; i < ga.rows(); ++i)
      for (std::size_t j = 0; j < ga.cols(); ++j) ga(i, j) += G(j, i);
  });
}

template <typename T>
Var add(Tape<T>& t, Var a, Var b) {
  const Tensor<T>& A = t.value(a);
  const Tensor<T>& B = t.value(b);
  require_same(A, B, "add");
  Tensor<T> y = A;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += B[i];
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a) || t.needs_grad(b), [a, b, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    if (tp.needs_grad(a)) simd::axpy(T(1), G.data(), tp.grad(a).data(), G.size());
    if (tp.needs_grad(b)) simd::axpy(T(1), G.data(), tp.grad(b).data(), G.size());
  });
}

template <typename T>
Var sub(Tape<T>& t, Var a, Var b) {
  const Tensor<T>& A = t.value(a);
  const Tensor<T>& B = t.value(b);
  require_same(A, B, "sub");
  Tensor<T> y = A;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= B[i];
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a) || t.needs_grad(b), [a, b, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    if (tp.needs_grad(a)) simd::axpy(T(1), G.data(), tp.grad(a).data(), G.size());
    if (tp.needs_grad(b)) simd::axpy(T(-1), G.data(), tp.grad(b).data(), G.size());
  });
}

template <typename T>
Var add_row(Tape<T>& t, Var a, Var b) {
  const Tensor<T>& A = t.value(a);
  const Tensor<T>& B = t.value(b);
  require_rank2(A, "add_row");
  if (B.size() != A.cols()) throw DomainError("add_row: bias length does not match columns");
  Tensor<T> y = A;
  for (std::size_t r = 0; r < A.rows(); ++r) simd::axpy(T(1), B.data(), y.data() + r * A.cols(), A.cols());
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a) || t.needs_grad(b), [a, b, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    if (tp.needs_grad(a)) simd::axpy(T(1), G.data(), tp.grad(a).data(), G.size());
    if (tp.needs_grad(b)) {
      Tensor<T>& gb = tp.grad(b);
      for (std::size_t r = 0; r < G.rows(); ++r) simd::axpy(T(1), G.data() + r * G.cols(), gb.data(), G.cols());
    }
  });
}

template <typename T>
Var add_scalar(Tape<T>& t, Var a, Var s) {
  const Tensor<T>& A = t.value(a);
  if (t.value(s).size() != 1) throw DomainError("add_scalar: expected a 1 x 1 operand");
  const T sv = t.value(s)[0];
  Tensor<T> y = A;
  for (T& v : y.values()) v += sv;
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a) || t.needs_grad(s), [a, s, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    if (tp.needs_grad(a)) simd::axpy(T(1), G.data(), tp.grad(a).data(), G.size());
    if (tp.needs_grad(s)) {
      T acc = 0;
      for (T g : G.values()) acc += g;
      tp.grad(s)[0] += acc;
    }
  });
}

template <typename T>
Var scale(Tape<T>& t, Var a, T factor) {
  Tensor<T> y = t.value(a);
  for (T& v : y.values()) v *= factor;
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a), [a, out, factor](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    simd::axpy(factor, G.data(), tp.grad(a).data(), G.size());
  });
}

template <typename T>
Var scale_by(Tape<T>& t, Var s, Var a) {
  if (t.value(s).size() != 1) throw DomainError("scale_by: expected a 1 x 1 scale");
  const T sv = t.value(s)[0];
  Tensor<T> y = t.value(a);
  for (T& v : y.values()) v *= sv;
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a) || t.needs_grad(s), [s, a, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    const Tensor<T>& A = tp.value(a);
    if (tp.needs_grad(a)) simd::axpy(tp.value(s)[0], G.data(), tp.grad(a).data(), G.size());
    if (tp.needs_grad(s)) tp.grad(s)[0] += simd::dot(G.data(), A.data(), G.size());
  });
}

template <typename T>
Var lerp(Tape<T>& t, Var a, Var b, Var s) {
  if (t.value(s).size() != 1) throw DomainError("lerp: expected a 1 x 1 weight");
  if (!t.value(a).same_shape(t.value(b))) throw DomainError("lerp: shape mismatch");
  const T sv = t.value(s)[0];
  const Tensor<T>& B = t.value(b);
  Tensor<T> y = t.value(a);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::lerp(y[i], B[i], sv);
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a) || t.needs_grad(b) || t.needs_grad(s), [a, b, s, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    const T w = tp.value(s)[0];
    if (tp.needs_grad(a)) simd::axpy(T(1) - w, G.data(), tp.grad(a).data(), G.size());
    if (tp.needs_grad(b)) simd::axpy(w, G.data(), tp.grad(b).data(), G.size());
    if (tp.needs_grad(s)) {
      const Tensor<T>& A = tp.value(a);
      const Tensor<T>& B = tp.value(b);
      T acc = 0;
      for (std::size_t i = 0; i < G.size(); ++i) acc += G[i] * (B[i] - A[i]);
      tp.grad(s)[0] += acc;
    }
  });
}

template <typename T>
Var softmax_rows(Tape<T>& t, Var a, KeyMask mask) {
  const Tensor<T>& A = t.value(a);
  require_rank2(A, "softmax_rows");
  Tensor<T> y = A;
  for (std::size_t r = 0; r < y.rows(); ++r) softmax_inplace<T>(y.row_span(r), mask);
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a), [a, out](Tape<T>& tp) {
    const Tensor<T>& Y = tp.value(Var{out});
    const Tensor<T>& G = tp.grad(Var{out});
    Tensor<T>& ga = tp.grad(a);
    const std::size_t n = Y.cols();
    for (std::size_t r = 0; r < Y.rows(); ++r) {
      const T* y = Y.data() + r * n;
      const T* g = G.data() + r * n;
      const T inner = simd::dot(y, g, n);
      T* gr = ga.data() + r * n;
      for (std::size_t j = 0; j < n; ++j) gr[j] += y[j] * (g[j] - inner);
    }
  });
}

template <typename T>
Var concat_cols(Tape<T>& t, std::span<const Var> parts) {
  if (parts.empty()) throw DomainError("concat_cols: nothing to concatenate");
  const std::size_t rows = t.value(parts[0]).rows();
  std::size_t cols = 0;
  bool needs = false;
  for (Var p : parts) {
    const Tensor<T>& x = t.value(p);
    require_rank2(x, "concat_cols");
    if (x.rows() != rows) throw DomainError("concat_cols: row counts differ");
    cols += x.cols();
    needs = needs || t.needs_grad(p);
  }
  Tensor<T> y({rows, cols});
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor<T>& x = t.value(p);
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(x.data() + r * x.cols(), x.cols(), y.data() + r * cols + off);
    off += x.cols();
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.push(std::move(y), needs, [inputs, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    std::size_t off = 0;
    for (Var p : inputs) {
      const std::size_t c = tp.value(p).cols();
      if (tp.needs_grad(p)) {
        Tensor<T>& gp = tp.grad(p);
        for (std::size_t r = 0; r < G.rows(); ++r)
          simd::axpy(T(1), G.data() + r * G.cols() + off, gp.data() + r * c, c);
      }
      off += c;
    }
  });
}

template <typename T>
Var concat_rows(Tape<T>& t, std::span<const Var> parts) {
  if (parts.empty()) throw DomainError("concat_rows: nothing to concatenate");
  const std::size_t cols = t.value(parts[0]).cols();
  std::size_t rows = 0;
  bool needs = false;
  for (Var p : parts) {
    const Tensor<T>& x = t.value(p);
    require_rank2(x, "concat_rows");
    if (x.cols() != cols) throw DomainError("concat_rows: column counts differ");
    rows += x.rows();
    needs = needs || t.needs_grad(p);
  }
  Tensor<T> y({rows, cols});
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor<T>& x = t.value(p);
    std::copy_n(x.data(), x.size(), y.data() + off);
    off += x.size();
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.push(std::move(y), needs, [inputs, out](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    std::size_t off = 0;
    for (Var p : inputs) {
      const std::size_t n = tp.value(p).size();
      if (tp.needs_grad(p)) simd::axpy(T(1), G.data() + off, tp.grad(p).data(), n);
      off += n;
    }
  });
}

template <typename T>
Var slice_cols(Tape<T>& t, Var a, std::size_t begin, std::size_t count) {
  const Tensor<T>& A = t.value(a);
  require_rank2(A, "slice_cols");
  if (count == 0 || begin + count > A.cols()) throw DomainError("slice_cols: range out of bounds");
  Tensor<T> y({A.rows(), count});
  for (std::size_t r = 0; r < A.rows(); ++r)
    std::copy_n(A.data() + r * A.cols() + begin, count, y.data() + r * count);
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(std::move(y), t.needs_grad(a), [a, out, begin, count](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    Tensor<T>& ga = tp.grad(a);
    for (std::size_t r = 0; r < G.rows(); ++r)
      simd::axpy(T(1), G.data() + r * count, ga.data() + r * ga.cols() + begin, count);
  });
}

template <typename T>
Var gather_rows(Tape<T>& t, Var a, std::span<const int> idx) {
  const Tensor<T>& A = t.value(a);
  require_rank2(A, "gather_rows");
  if (idx.empty()) throw DomainError("gather_rows: empty index list");
  const std::size_t cols = A.cols();
  Tensor<T> y({idx.size(), cols});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= static_cast<int>(A.rows())) {
      throw DomainError("gather_rows: index " + std::to_string(idx[i]) + " out of range for " +
                        std::to_string(A.rows()) + " rows");
    }
    if (idx[i] >= 0) std::copy_n(A.data() + idx[i] * cols, cols, y.data() + i * cols);
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  std::vector<int> ids(idx.begin(), idx.end());
  return t.push(std::move(y), t.needs_grad(a), [a, out, ids = std::move(ids)](Tape<T>& tp) {
    const Tensor<T>& G = tp.grad(Var{out});
    Tensor<T>& ga = tp.grad(a);
    const std::size_t c = G.cols();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] >= 0) simd::axpy(T(1), G.data() + i * c, ga.data() + ids[i] * c, c);
    }
  });
}

template <typename T>
Var sum(Tape<T>& t, Var a) {
  T acc = 0;
  for (T v : t.value(a).values()) acc += v;
  const auto out = static_cast<std::uint32_t>(t.size());
  return t.push(Tensor<T>({1, 1}, {acc}), t.needs_grad(a), [a, out](Tape<T>& tp) {
    const T g = tp.grad(Var{out})[0];
    for (T& v : tp.grad(a).values()) v += g;
  });
}

template <typename T>
Var segment_softmax(Tape<T>& t, Var logits, std::span<const int> offsets) {
  const Tensor<T>& X = t.value(logits);
  require_rank2(X, "segment_softmax");
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != static_cast<int>(X.rows())) {
    throw DomainError("segment_softmax: offsets do not cover the logits");
  }
  const std::size_t k = X.cols();
  Tensor<T> y = X;
  for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
    const int lo = offsets[s], hi = offsets[s + 1];
    if (hi <= lo) throw DomainError("segment_softmax: empty segment " + std::to_string(s));
    for (std::size_t c = 0; c < k; ++c) {
      T peak = -std::numeric_limits<T>::infinity();
      for (int e = lo; e < hi; ++e) peak = std::max(peak, y(e, c));
      T total = 0;
      for (int e = lo; e < hi; ++e) {
        y(e, c) = std::exp(y(e, c) - peak);
        total += y(e, c);
      }
      for (int e = lo; e < hi; ++e) y(e, c) /= total;
    }
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  std::vector<int> offs(offsets.begin(), offsets.end());
  return t.push(std::move(y), t.needs_grad(logits), [logits, out, offs = std::move(offs)](Tape<T>& tp) {
    const Tensor<T>& Y = tp.value(Var{out});
    const Tensor<T>& G = tp.grad(Var{out});
    Tensor<T>& gx = tp.grad(logits);
    for (std::size_t s = 0; s + 1 < offs.size(); ++s) {
      for (std::size_t c = 0; c < Y.cols(); ++c) {
        T inner = 0;
        for (int e = offs[s]; e < offs[s + 1]; ++e) inner += Y(e, c) * G(e, c);
        for (int e = offs[s]; e < offs[s + 1]; ++e) gx(e, c) += Y(e, c) * (G(e, c) - inner);
      }
    }
  });
}

template <typename T>
Var segment_weighted_sum(Tape<T>& t, Var weights, Var values, std::span<const int> offsets) {
  const Tensor<T>& W = t.value(weights);
  const Tensor<T>& Y = t.value(values);
  require_rank2(W, "segment_weighted_sum");
  require_rank2(Y, "segment_weighted_sum");
  const std::size_t heads = W.cols();
  if (W.rows() != Y.rows() || Y.cols() % heads != 0) {
    throw DomainError("segment_weighted_sum: weights " + shape_string(W.shape()) +
                      " incompatible with values " + shape_string(Y.shape()));
  }
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != static_cast<int>(W.rows())) {
    throw DomainError("segment_weighted_sum: offsets do not cover the edges");
  }
  const std::size_t block = Y.cols() / heads;
  const std::size_t segments = offsets.size() - 1;
  Tensor<T> out_t({segments, Y.cols()});
  for (std::size_t s = 0; s < segments; ++s) {
    T* o = out_t.data() + s * Y.cols();
    for (int e = offsets[s]; e < offsets[s + 1]; ++e) {
      for (std::size_t k = 0; k < heads; ++k)
        simd::axpy(W(e, k), Y.data() + e * Y.cols() + k * block, o + k * block, block);
    }
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  std::vector<int> offs(offsets.begin(), offsets.end());
  return t.push(std::move(out_t), t.needs_grad(weights) || t.needs_grad(values),
                [weights, values, out, offs = std::move(offs)](Tape<T>& tp) {
                  const Tensor<T>& W = tp.value(weights);
                  const Tensor<T>& Y = tp.value(values);
                  const Tensor<T>& G = tp.grad(Var{out});
                  const std::size_t heads = W.cols();
                  const std::size_t block = Y.cols() / heads;
                  const bool gw_on = tp.needs_grad(weights);
                  const bool gy_on = tp.needs_grad(values);
                  for (std::size_t s = 0; s + 1 < offs.size(); ++s) {
                    const T* g = G.data() + s * G.cols();
                    for (int e = offs[s]; e < offs[s + 1]; ++e) {
                      for (std::size_t k = 0; k < heads; ++k) {
                        if (gw_on) tp.grad(weights)(e, k) += simd::dot(g + k * block, Y.data() + e * Y.cols() + k * block, block);
                        if (gy_on) simd::axpy(W(e, k), g + k * block, tp.grad(values).data() + e * Y.cols() + k * block, block);
                      }
                    }
                  }
                });
}

template <typename T>
Var conv_maxpool(Tape<T>& t, Var x, std::size_t length, Var w, Var b) {
  const Tensor<T>& X = t.value(x);
  const Tensor<T>& W = t.value(w);
  const Tensor<T>& B = t.value(b);
  require_rank2(X, "conv_maxpool");
  require_rank2(W, "conv_maxpool");
  const std::size_t d = X.cols();
  const std::size_t filters = W.rows();
  if (W.cols() % d != 0) throw DomainError("conv_maxpool: filter width is not a multiple of d");
  const std::size_t h = W.cols() / d;
  if (length < h) {
    throw DomainError("conv_maxpool: sequence length " + std::to_string(length) +
                      " shorter than filter width " + std::to_string(h));
  }
  if (X.rows() % length != 0) throw DomainError("conv_maxpool: rows are not a multiple of length");
  if (B.size() != filters) throw DomainError("conv_maxpool: bias length does not match filters");
  const std::size_t n = X.rows() / length;
  const std::size_t windows = length - h + 1;
  Tensor<T> y({n, filters});
  std::vector<int> argmax(n * filters);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < filters; ++f) {
      T best = -std::numeric_limits<T>::infinity();
      int arg = 0;
      for (std::size_t j = 0; j < windows; ++j) {
        const T v = simd::dot(X.data() + (i * length + j) * d, W.data() + f * h * d, h * d) + B[f];
        if (v > best) {
          best = v;
          arg = static_cast<int>(j);
        }
      }
      argmax[i * filters + f] = best > T(0) ? arg : -1;
      y(i, f) = best > T(0) ? best : T(0);
    }
  }
  if (t.tracking_branches()) {
    BranchHash bh;
    for (int a : argmax) bh.add(static_cast<std::uint64_t>(a + 1));
    t.note_branch(bh.h);
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  const bool needs = t.needs_grad(x) || t.needs_grad(w) || t.needs_grad(b);
  return t.push(std::move(y), needs, [x, w, b, out, length, argmax = std::move(argmax)](Tape<T>& tp) {
    const Tensor<T>& X = tp.value(x);
    const Tensor<T>& W = tp.value(w);
    const Tensor<T>& G = tp.grad(Var{out});
    const std::size_t d = X.cols();
    const std::size_t filters = W.rows();
    const std::size_t span = W.cols();
    const bool gx_on = tp.needs_grad(x), gw_on = tp.needs_grad(w), gb_on = tp.needs_grad(b);
    for (std::size_t i = 0; i < G.rows(); ++i) {
      for (std::size_t f = 0; f < filters; ++f) {
        const int j = argmax[i * filters + f];
        const T g = G(i, f);
        if (j < 0 || g == T(0)) continue;
        const std::size_t row = i * length + static_cast<std::size_t>(j);
        if (gb_on) tp.grad(b)[f] += g;
        if (gw_on) simd::axpy(g, X.data() + row * d, tp.grad(w).data() + f * span, span);
        if (gx_on) simd::axpy(g, W.data() + f * span, tp.grad(x).data() + row * d, span);
      }
    }
  });
}

template <typename T>
Var nll_loss(Tape<T>& t, Var probs, std::span<const int> gold, bool mean) {
  const Tensor<T>& P = t.value(probs);
  require_rank2(P, "nll_loss");
  if (gold.size() != P.rows()) throw DomainError("nll_loss: label count does not match rows");
  constexpr T kFloor = T(1e-12);
  const T factor = mean ? T(1) / static_cast<T>(P.rows()) : T(1);
  T acc = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= static_cast<int>(P.cols())) throw DomainError("nll_loss: label out of range");
    acc -= std::log(std::max(P(i, gold[i]), kFloor));
  }
  const auto out = static_cast<std::uint32_t>(t.size());
  std::vector<int> labels(gold.begin(), gold.end());
  return t.push(Tensor<T>({1, 1}, {acc * factor}), t.needs_grad(probs),
                [probs, out, factor, labels = std::move(labels)](Tape<T>& tp) {
                  const Tensor<T>& P = tp.value(probs);
                  const T g = tp.grad(Var{out})[0] * factor;
                  Tensor<T>& gp = tp.grad(probs);
                  for (std::size_t i = 0; i < labels.size(); ++i) {
                    const T p = P(i, labels[i]);
                    if (p > kFloor) gp(i, labels[i]) -= g / p;
                  }
                });
}

#define GLAN_INSTANTIATE(T)                                                              \
  template Var matmul<T>(Tape<T>&, Var, Var);                                            \
  template Var matmul_nt<T>(Tape<T>&, Var, Var);                                         \
  template Var transpose<T>(Tape<T>&, Var);                                              \
  template Var add<T>(Tape<T>&, Var, Var);                                               \
  template Var sub<T>(Tape<T>&, Var, Var);                                               \
  template Var add_row<T>(Tape<T>&, Var, Var);                                           \
  template Var add_scalar<T>(Tape<T>&, Var, Var);                                        \
  template Var scale<T>(Tape<T>&, Var, T);                                               \
  template Var scale_by<T>(Tape<T>&, Var, Var);                                          \
  template Var lerp<T>(Tape<T>&, Var, Var, Var);                                         \
  template Var relu<T>(Tape<T>&, Var);                                                   \
  template Var leaky_relu<T>(Tape<T>&, Var, T);                                          \
  template Var elu<T>(Tape<T>&, Var);                                                    \
  template Var sigmoid<T>(Tape<T>&, Var);                                                \
  template Var softmax_rows<T>(Tape<T>&, Var, KeyMask);                                  \
  template Var concat_cols<T>(Tape<T>&, std::span<const Var>);                           \
  template Var concat_rows<T>(Tape<T>&, std::span<const Var>);                           \
  template Var slice_cols<T>(Tape<T>&, Var, std::size_t, std::size_t);                   \
  template Var gather_rows<T>(Tape<T>&, Var, std::span<const int>);                      \
  template Var sum<T>(Tape<T>&, Var);                                                    \
  template Var segment_softmax<T>(Tape<T>&, Var, std::span<const int>);                  \
  template Var segment_weighted_sum<T>(Tape<T>&, Var, Var, std::span<const int>);        \
  template Var conv_maxpool<T>(Tape<T>&, Var, std::size_t, Var, Var);                    \
  template Var nll_loss<T>(Tape<T>&, Var, std::span<const int>, bool);

GLAN_INSTANTIATE(float)
GLAN_INSTANTIATE(double)

}  // namespace glan::ops
