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
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glan/numerics/tensor.hpp"

namespace glan {

// A named trainable tensor together with its accumulated gradient.
template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;  // empty until something accumulates into it

  void zero_grad() { grad = Tensor<T>(); }
  Tensor<T>& ensure_grad() {
    if (grad.empty()) grad = Tensor<T>(value.shape());
    return grad;
  }
};

// Ordered collection of parameters; order is insertion order and is the
// order used by checkpoints and optimizers.
template <typename T>
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore& other) { *this = other; }
  ParamStore& operator=(const ParamStore& other);
  ParamStore(ParamStore&&) noexcept = default;
  ParamStore& operator=(ParamStore&&) noexcept = default;

  Parameter<T>& add(std::string name, Tensor<T> init);
  Parameter<T>* find(std::string_view name);
  const Parameter<T>* find(std::string_view name) const;
  Parameter<T>& at(std::string_view name);
  const Parameter<T>& at(std::string_view name) const;

  std::size_t size() const { return params_.size(); }
  Parameter<T>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *params_[i]; }

  std::vector<Parameter<T>*> all();
  std::vector<Parameter<T>*> with_prefix(std::string_view prefix);
  std::size_t num_values() const;

  void zero_grad();

  // Copies values (not gradients) from a store with identical layout.
  void assign_values(const ParamStore& other);

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Var {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t id = kNone;
  bool valid() const { return id != kNone; }
};

// Reverse-mode gradient tape. Operations push a node holding the forward
// value plus a closure that moves the node's gradient to its inputs.
// Parameters are leaves whose gradients accumulate straight into
// Parameter::grad.
template <typename T>
class Tape {
 public:
  using Backward = std::function<void(Tape&)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const { return grad_enabled_; }

  Var param(Parameter<T>& p);
  Var constant(Tensor<T> value);
  Var push(Tensor<T> value, bool needs_grad, Backward backward);

  const Tensor<T>& value(Var v) const;
  bool needs_grad(Var v) const { return nodes_[v.id].needs_grad; }
  // Gradient buffer of a node, zero-initialized on first access.
  Tensor<T>& grad(Var v);
  bool has_grad(Var v) const;

  // Seeds d(loss)/d(loss) = 1 and runs every recorded closure in reverse.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

  // Branch tracking records which side of every non-smooth point
  // (ReLU/LeakyReLU sign, max-pool argmax) a forward pass took. Two passes
  // with equal signatures lie on the same smooth piece.
  void track_branches(bool on) { track_branches_ = on; }
  bool tracking_branches() const { return track_branches_; }
  void note_branch(std::uint64_t bits) {
    signature_ = (signature_ ^ bits) * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
  }
  std::uint64_t branch_signature() const { return signature_; }

 private:
  struct Node {
    Tensor<T> value;
    const Tensor<T>* ref = nullptr;
    Tensor<T> grad;
    Parameter<T>* param = nullptr;
    bool needs_grad = false;
    Backward backward;
  };

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter<T>*, Var> param_nodes_;
  bool grad_enabled_ = true;
  bool track_branches_ = false;
  std::uint64_t signature_ = 0xcbf29ce484222325ULL;
};

}  // namespace glan
