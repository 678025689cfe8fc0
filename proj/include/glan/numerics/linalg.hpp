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

#include <cstddef>

#include "glan/numerics/tensor.hpp"

namespace glan::linalg {

enum class Trans { kNo, kYes };

// C += op(A) * op(B), all row-major. op(A) is m x k, op(B) is k x n.
// Rows of C are computed independently of each other, so results for a row
// never depend on which other rows are present.
template <typename T>
void gemm_acc(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
              const T* b, T* c);

// Returns op(A) * op(B) for rank-2 tensors.
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, Trans ta = Trans::kNo,
                 Trans tb = Trans::kNo);

}  // namespace glan::linalg
