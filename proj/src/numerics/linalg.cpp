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

#include "glan/numerics/linalg.hpp"

#include <string>

#include "glan/numerics/kernels.hpp"

namespace glan::linalg {

template <typename T>
void gemm_acc(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
              const T* b, T* c) {
  // A is m x k (or k x m when transposed), B is k x n (or n x k).
  if (ta == Trans::kNo && tb == Trans::kNo) {
    for (std::size_t i = 0; i < m; ++i) {
      T* ci = c + i * n;
      const T* ai = a + i * k;
      for (std::size_t p = 0; p < k; ++p) {
        if (ai[p] != T(0)) simd::axpy(ai[p], b + p * n, ci, n);
      }
    }
  } else if (ta == Trans::kNo && tb == Trans::kYes) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) c[i * n + j] += simd::dot(a + i * k, b + j * k, k);
    }
  } else if (ta == Trans::kYes && tb == Trans::kNo) {
    for (std::size_t i = 0; i < m; ++i) {
      T* ci = c + i * n;
      for (std::size_t p = 0; p < k; ++p) {
        const T aval = a[p * m + i];
        if (aval != T(0)) simd::axpy(aval, b + p * n, ci, n);
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        T acc = 0;
        for (std::size_t p = 0; p < k; ++p) acc += a[p * m + i] * b[j * k + p];
        c[i * n + j] += acc;
      }
    }
  }
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, Trans ta, Trans tb) {
  if (a.rank() != 2 || b.rank() != 2) throw DomainError("matmul expects rank-2 operands");
  const std::size_t m = ta == Trans::kNo ? a.rows() : a.cols();
  const std::size_t ka = ta == Trans::kNo ? a.cols() : a.rows();
  const std::size_t kb = tb == Trans::kNo ? b.rows() : b.cols();
  const std::size_t n = tb == Trans::kNo ? b.cols() : b.rows();
  if (ka != kb) {
    throw DomainError("matmul inner dimensions differ: " + shape_string(a.shape()) + " x " +
                      shape_string(b.shape()));
  }
  Tensor<T> c({m, n});
  gemm_acc(ta, tb, m, n, ka, a.data(), b.data(), c.data());
  return c;
}

template void gemm_acc<float>(Trans, Trans, std::size_t, std::size_t, std::size_t, const float*,
                              const float*, float*);
template void gemm_acc<double>(Trans, Trans, std::size_t, std::size_t, std::size_t,
                               const double*, const double*, double*);
template Tensor<float> matmul(const Tensor<float>&, const Tensor<float>&, Trans, Trans);
template Tensor<double> matmul(const Tensor<double>&, const Tensor<double>&, Trans, Trans);

}  // namespace glan::linalg

namespace glan {

std::string shape_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

}  // namespace glan
