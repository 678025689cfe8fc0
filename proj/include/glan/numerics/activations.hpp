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

#include <cmath>
#include <span>
#include <vector>

namespace glan {

inline constexpr double kLeakySlope = 0.2;

template <typename T>
T leaky_relu(T x, T slope = T(kLeakySlope)) {
  return x >= T(0) ? x : slope * x;
}

template <typename T>
T elu(T x) {
  return x >= T(0) ? x : std::expm1(x);
}

template <typename T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
T relu(T x) {
  return x > T(0) ? x : T(0);
}

// Max-subtracted softmax. Throws DomainError on an empty input.
template <typename T>
std::vector<T> softmax(std::span<const T> v);

// In-place softmax over one row; entries with keep[i] == 0 get exactly 0.
// At least one entry must be kept.
template <typename T>
void softmax_inplace(std::span<T> row, std::span<const unsigned char> keep = {});

}  // namespace glan
