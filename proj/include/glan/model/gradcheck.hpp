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

#include "glan/model/config.hpp"
#include "glan/numerics/grad_check.hpp"

namespace glan {

// d = 12 (widths 3,4,5 x 4 filters), h = K = 2, T = 1, L = 10, d_u = 4.
TrainConfig grad_check_config();

// Central-difference check of the whole model's loss on three synthetic
// cascades, covering every parameter group the ablation mode reads.
GradCheckReport end_to_end_grad_check(const TrainConfig& cfg, std::uint64_t corpus_seed = 3, double eps = 1e-5);

}  // namespace glan
