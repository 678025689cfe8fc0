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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glan {

enum class Ablation { kFull, kNoLre, kNoGre, kOnlyText };

std::string_view ablation_name(Ablation a);
std::optional<Ablation> parse_ablation(std::string_view name);
inline bool uses_local(Ablation a) { return a == Ablation::kFull || a == Ablation::kNoGre; }
inline bool uses_global(Ablation a) { return a == Ablation::kFull || a == Ablation::kNoLre; }

enum class Precision { k32, k64 };

struct TrainConfig {
  // Text encoder.
  int d = 300;
  int length = 50;
  std::vector<int> widths{3, 4, 5};
  int filters_per_width = 100;
  int min_count = 2;
  // Attention.
  int heads = 10;         // local multi-head attention
  int global_heads = 10;  // K in the graph attention
  int layers = 2;         // T rounds of graph aggregation
  int user_dim = 64;      // d_u
  bool per_head_scale = true;  // scale logits by sqrt(d/h) rather than sqrt(d)
  int max_retweets = 128;
  int neighbor_cap = 256;
  // Optimisation.
  int batch = 64;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lr_decay = 0.5;
  int decay_patience = 3;
  double min_lr = 1e-5;
  int max_epochs = 100;
  int patience = 10;
  bool mean_loss = true;
  double init_range = 0.1;
  std::uint64_t seed = 1;
  Precision precision = Precision::k32;
  Ablation ablation = Ablation::kFull;

  // Small dimensions for desk-scale runs and tests.
  static TrainConfig small();

  // Throws ConfigError when dimensions are inconsistent.
  void validate() const;

  // Flat "key = value" text; '#' starts a comment.
  std::string to_text() const;
  void set(std::string_view key, std::string_view value);
  static TrainConfig parse(std::string_view text, TrainConfig base);
  static TrainConfig parse(std::string_view text);
  static TrainConfig load(const std::string& path, TrainConfig base);
  static TrainConfig load(const std::string& path);
};

std::vector<int> parse_int_list(std::string_view text);

}  // namespace glan
