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

#include <functional>
#include <span>
#include <string>

#include "glan/numerics/tape.hpp"

namespace glan {

struct GradCheckReport {
  bool valid = true;         // false when the loss is not deterministic
  double max_rel_error = 0;  // |analytic - central| / max(1, |central|)
  std::string worst_param;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
  std::size_t flagged = 0;   // entries whose +/- eps probes straddle a kink
  std::string message;

  bool passed(double tolerance = 1e-4) const { return valid && max_rel_error <= tolerance; }
};

// Builds a scalar loss on the supplied tape, reading parameters via
// tape.param(). Must be a pure function of the parameter values.
using LossBuilder = std::function<Var(Tape<double>&)>;

// Compares reverse-mode gradients against central differences for every
// entry of `params`. eps must lie in [1e-6, 1e-3]. The analytic gradients
// are left in Parameter::grad.
GradCheckReport grad_check(const LossBuilder& loss_fn, std::span<Parameter<double>* const> params,
                           double eps = 1e-5);

}  // namespace glan
