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

#include <cstdint>
#include <span>
#include <vector>

#include "glan/data/corpus.hpp"

namespace glan::data {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> dev;
  std::vector<std::size_t> test;
};

struct SplitSizes {
  std::size_t train, dev, test;
};

// |dev| = floor(n / 10), |train| = floor(3 (n - |dev|) / 4), test gets the rest.
SplitSizes split_sizes(std::size_t n);

// Stratified random split (indices into `cascades`); deterministic given
// the seed. Throws DomainError for fewer than 8 cascades or when any part
// would be empty.
Split split_dataset(std::span<const Cascade> cascades, std::uint64_t seed);

}  // namespace glan::data
