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

#include "glan/numerics/adam.hpp"

#include <cmath>

namespace glan {

template <typename T>
void Adam<T>::update(std::size_t slot, Tensor<T>& value, const Tensor<T>* grad) {
  if (slot >= m_.size()) {
    m_.resize(slot + 1);
    v_.resize(slot + 1);
    touched_.resize(slot + 1, false);
  }
  if (m_[slot].empty()) {
    m_[slot] = Tensor<T>(value.shape());
    v_[slot] = Tensor<T>(value.shape());
  }
  if (!m_[slot].same_shape(value)) throw DomainError("adam: parameter shape changed between steps");
  if (grad == nullptr && !touched_[slot]) return;  // moments are zero, so the update is zero
  if (grad) touched_[slot] = true;

  const T b1 = static_cast<T>(config_.beta1);
  const T b2 = static_cast<T>(config_.beta2);
  const T lr = static_cast<T>(config_.lr);
  const T eps = static_cast<T>(config_.epsilon);
  const T c1 = T(1) - static_cast<T>(std::pow(config_.beta1, static_cast<double>(step_)));
  const T c2 = T(1) - static_cast<T>(std::pow(config_.beta2, static_cast<double>(step_)));
  Tensor<T>& m = m_[slot];
  Tensor<T>& v = v_[slot];
  for (std::size_t i = 0; i < value.size(); ++i) {
    const T g = grad ? (*grad)[i] : T(0);
    m[i] = b1 * m[i] + (T(1) - b1) * g;
    v[i] = b2 * v[i] + (T(1) - b2) * g * g;
    const T m_hat = m[i] / c1;
    const T v_hat = v[i] / c2;
    value[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <typename T>
void Adam<T>::step(std::span<Parameter<T>* const> params) {
  for (Parameter<T>* p : params) {
    if (!p->grad.empty() && !p->grad.same_shape(p->value)) {
      throw DomainError("adam: gradient shape mismatch for " + p->name);
    }
  }
  ++step_;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter<T>& p = *params[i];
    update(i, p.value, p.grad.empty() ? nullptr : &p.grad);
  }
}

template <typename T>
void Adam<T>::step(std::span<Tensor<T>* const> values, std::span<const Tensor<T>> grads) {
  if (values.size() != grads.size()) throw DomainError("adam: parameter and gradient counts differ");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]->same_shape(grads[i])) {
      throw DomainError("adam: gradient shape " + shape_string(grads[i].shape()) +
                        " does not match parameter shape " + shape_string(values[i]->shape()));
    }
  }
  ++step_;
  for (std::size_t i = 0; i < values.size(); ++i) update(i, *values[i], &grads[i]);
}

template class Adam<float>;
template class Adam<double>;

}  // namespace glan
