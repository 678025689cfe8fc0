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

#include "glan/data/split.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "glan/errors.hpp"

namespace glan::data {

SplitSizes split_sizes(std::size_t n) {
  const std::size_t dev = n / 10;
  const std::size_t train = (n - dev) * 3 / 4;
  return {train, dev, n - dev - train};
}

Split split_dataset(std::span<const Cascade> cascades, std::uint64_t seed) {
  const std::size_t n = cascades.size();
  if (n < 8) throw DomainError("split: need at least 8 cascades, got " + std::to_string(n));
  const SplitSizes sizes = split_sizes(n);
  if (sizes.train == 0 || sizes.dev == 0 || sizes.test == 0) {
    throw DomainError("split: " + std::to_string(n) + " cascades leave an empty partition");
  }

  int max_label = 0;
  for (const auto& c : cascades) max_label = std::max(max_label, c.label);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(cascades[i].label)].push_back(i);

  // Shuffle inside each class, then interleave classes by relative rank so
  // that every prefix of the merged order is close to the class mix.
  std::mt19937_64 rng(seed);
  std::vector<std::tuple<double, int, std::size_t>> order;
  order.reserve(n);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& members = by_class[c];
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t r = 0; r < members.size(); ++r) {
      const double key = (static_cast<double>(r) + 0.5) / static_cast<double>(members.size());
      order.emplace_back(key, static_cast<int>(c), members[r]);
    }
  }
  std::sort(order.begin(), order.end());

  Split split;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t idx = std::get<2>(order[i]);
    if (i < sizes.dev) {
      split.dev.push_back(idx);
    } else if (i < sizes.dev + sizes.test) {
      split.test.push_back(idx);
    } else {
      split.train.push_back(idx);
    }
  }
  return split;
}

}  // namespace glan::data
