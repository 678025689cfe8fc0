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

#include "glan/numerics/activations.hpp"

#include <algorithm>
#include <limits>

#include "glan/errors.hpp"

namespace glan {

template <typename T>
void softmax_inplace(std::span<T> row, std::span<const unsigned char> keep) {
  if (row.empty()) throw DomainError("softmax of an empty vector");
  if (!keep.empty() && keep.size() != row.size()) throw DomainError("softmax mask length mismatch");
  const auto kept = [&](std::size_t i) { return keep.empty() || keep[i] != 0; };
  T peak = -std::numeric_limits<T>::infinity();
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (kept(i)) peak = std::max(peak, row[i]);
  }
  if (peak == -std::numeric_limits<T>::infinity()) {
    bool any_kept = false;
    for (std::size_t i = 0; i < row.size(); ++i) any_kept = any_kept || kept(i);
    if (!any_kept) throw DomainError("softmax with every position masked");
    if (std::any_of(row.begin(), row.end(), [](T x) { return std::isnan(x); })) {
      std::fill(row.begin(), row.end(), std::numeric_limits<T>::quiet_NaN());
      return;
    }
  }
  T total = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = kept(i) ? std::exp(row[i] - peak) : T(0);
    total += row[i];
  }
  for (T& x : row) x /= total;
}

template <typename T>
std::vector<T> softmax(std::span<const T> v) {
  std::vector<T> out(v.begin(), v.end());
  softmax_inplace<T>(out);
  return out;
}

template std::vector<float> softmax<float>(std::span<const float>);
template std::vector<double> softmax<double>(std::span<const double>);
template void softmax_inplace<float>(std::span<float>, std::span<const unsigned char>);
template void softmax_inplace<double>(std::span<double>, std::span<const unsigned char>);

}  // namespace glan
