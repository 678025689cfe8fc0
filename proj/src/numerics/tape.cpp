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

#include "glan/numerics/tape.hpp"

namespace glan {

template <typename T>
ParamStore<T>& ParamStore<T>::operator=(const ParamStore& other) {
  if (this == &other) return *this;
  params_.clear();
  index_.clear();
  for (const auto& p : other.params_) {
    params_.push_back(std::make_unique<Parameter<T>>(*p));
    index_.emplace(p->name, params_.size() - 1);
  }
  return *this;
}

template <typename T>
Parameter<T>& ParamStore<T>::add(std::string name, Tensor<T> init) {
  if (index_.contains(name)) throw DomainError("duplicate parameter name: " + name);
  index_.emplace(name, params_.size());
  params_.push_back(std::make_unique<Parameter<T>>(Parameter<T>{std::move(name), std::move(init), {}}));
  return *params_.back();
}

template <typename T>
Parameter<T>* ParamStore<T>::find(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : params_[it->second].get();
}

template <typename T>
const Parameter<T>* ParamStore<T>::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : params_[it->second].get();
}

template <typename T>
Parameter<T>& ParamStore<T>::at(std::string_view name) {
  if (auto* p = find(name)) return *p;
  throw DomainError("unknown parameter: " + std::string(name));
}

template <typename T>
const Parameter<T>& ParamStore<T>::at(std::string_view name) const {
  if (const auto* p = find(name)) return *p;
  throw DomainError("unknown parameter: " + std::string(name));
}

template <typename T>
std::vector<Parameter<T>*> ParamStore<T>::all() {
  std::vector<Parameter<T>*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

template <typename T>
std::vector<Parameter<T>*> ParamStore<T>::with_prefix(std::string_view prefix) {
  std::vector<Parameter<T>*> out;
  for (auto& p : params_) {
    if (std::string_view(p->name).starts_with(prefix)) out.push_back(p.get());
  }
  return out;
}

template <typename T>
std::size_t ParamStore<T>::num_values() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

template <typename T>
void ParamStore<T>::zero_grad() {
  for (auto& p : params_) p->zero_grad();
}

template <typename T>
void ParamStore<T>::assign_values(const ParamStore& other) {
  if (other.size() != size()) throw DomainError("parameter stores differ in layout");
  for (std::size_t i = 0; i < size(); ++i) {
    if (params_[i]->name != other[i].name || !params_[i]->value.same_shape(other[i].value)) {
      throw DomainError("parameter stores differ at " + params_[i]->name);
    }
    params_[i]->value = other[i].value;
  }
}

template <typename T>
Var Tape<T>::param(Parameter<T>& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return it->second;
  Node node;
  node.ref = &p.value;
  node.param = &p;
  node.needs_grad = grad_enabled_;
  nodes_.push_back(std::move(node));
  Var v{static_cast<std::uint32_t>(nodes_.size() - 1)};
  param_nodes_.emplace(&p, v);
  return v;
}

template <typename T>
Var Tape<T>::constant(Tensor<T> value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
Var Tape<T>::push(Tensor<T> value, bool needs_grad, Backward backward) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = grad_enabled_ && needs_grad;
  if (node.needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

template <typename T>
const Tensor<T>& Tape<T>::value(Var v) const {
  const Node& node = nodes_.at(v.id);
  return node.ref ? *node.ref : node.value;
}

template <typename T>
Tensor<T>& Tape<T>::grad(Var v) {
  Node& node = nodes_.at(v.id);
  if (node.param) return node.param->ensure_grad();
  if (node.grad.empty()) node.grad = Tensor<T>(value(v).shape());
  return node.grad;
}

template <typename T>
bool Tape<T>::has_grad(Var v) const {
  const Node& node = nodes_.at(v.id);
  return node.param ? !node.param->grad.empty() : !node.grad.empty();
}

template <typename T>
void Tape<T>::backward(Var loss) {
  if (!grad_enabled_) throw DomainError("backward on a tape recorded without gradients");
  if (value(loss).size() != 1) throw DomainError("backward requires a scalar loss");
  if (!needs_grad(loss)) return;
  grad(loss)[0] += T(1);
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& node = nodes_[i];
    if (node.backward && !node.grad.empty()) node.backward(*this);
  }
}

template struct Parameter<float>;
template struct Parameter<double>;
template class ParamStore<float>;
template class ParamStore<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace glan
