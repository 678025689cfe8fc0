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

#include "glan/model/context.hpp"
#include "glan/model/global_encoding.hpp"
#include "glan/model/local_encoding.hpp"
#include "glan/model/text_encoder.hpp"

namespace glan {

struct Predictions {
  std::vector<int> labels;
  std::vector<std::vector<double>> probs;  // one distribution per item
};

// Text encoder, local and global relation encoders and the softmax
// classifier over [m~; m_global]. Every parameter group exists in every
// ablation mode so checkpoints share one layout; disabled groups are simply
// never read.
template <typename T>
class GlanModel {
 public:
  GlanModel(const TrainConfig& cfg, std::size_t vocab_size, int num_classes, std::size_t free_tweets,
            std::size_t free_users);
  static GlanModel for_dataset(const Dataset& dataset, const TrainConfig& cfg);

  GlanModel(const GlanModel&) = delete;
  GlanModel& operator=(const GlanModel&) = delete;
  GlanModel(GlanModel&&) = default;

  const TrainConfig& config() const { return cfg_; }
  int num_classes() const { return num_classes_; }
  ParamStore<T>& params() { return store_; }
  const ParamStore<T>& params() const { return store_; }

  // Copies values from a store with the same names and shapes; anything else
  // is a FormatError.
  void load_values(const ParamStore<T>& other);

  struct Output {
    Var probs;   // targets x classes
    Var local;   // targets x d, m~ (or m without the local encoder)
    Var global;  // targets x d, zeros without the global encoder
  };

  // m~ for the given tweet nodes, one row each.
  Var local_representations(Tape<T>& tape, const GraphContext<T>& ctx, std::span<const int> tweets) const;

  Output forward(Tape<T>& tape, const GraphContext<T>& ctx, std::span<const int> targets) const;

  // Argmax of the class distribution; ties go to the lower class index.
  Predictions predict(const GraphContext<T>& ctx, std::span<const int> targets) const;

  TextEncoder<T> text;
  LocalParams<T> local;
  GlobalParams<T> global;
  Parameter<T>* cls_w = nullptr;  // 2d x C
  Parameter<T>* cls_b = nullptr;  // 1 x C

 private:
  TrainConfig cfg_;
  int num_classes_ = 2;
  ParamStore<T> store_;
};

// Classifier head alone: softmax([m~; m_global] W + b).
template <typename T>
Var classify(Tape<T>& tape, Var local, Var global, Var w, Var b);

// Argmax per row with ties to the lower index.
std::vector<int> argmax_rows(const Tensor<float>& probs);
std::vector<int> argmax_rows(const Tensor<double>& probs);

}  // namespace glan
