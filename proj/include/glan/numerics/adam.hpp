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

#include <span>
#include <vector>

#include "glan/numerics/tape.hpp"

namespace glan {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments are created lazily and keyed by the
// parameter's position in the list passed to step(), so the list must keep
// the same order across calls.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.lr = lr; }
  long steps() const { return step_; }

  // One update using each parameter's accumulated grad (empty grad = zero).
  void step(std::span<Parameter<T>* const> params);

  // Explicit-gradient form; throws DomainError on any shape mismatch.
  void step(std::span<Tensor<T>* const> values, std::span<const Tensor<T>> grads);

  const Tensor<T>& first_moment(std::size_t i) const { return m_.at(i); }
  const Tensor<T>& second_moment(std::size_t i) const { return v_.at(i); }

 private:
  void update(std::size_t slot, Tensor<T>& value, const Tensor<T>* grad);

  AdamConfig config_;
  long step_ = 0;
  std::vector<Tensor<T>> m_;
  std::vector<Tensor<T>> v_;
  std::vector<bool> touched_;
};

}  // namespace glan
