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

#include <iosfwd>
#include <string>
#include <vector>

#include "glan/model/model.hpp"

namespace glan {

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double train_accuracy = 0;
  double dev_accuracy = 0;
  double lr = 0;
  std::size_t clamped = 0;  // gold probabilities that hit the 1e-12 floor
};

// One JSON object per line, doubles printed round-trip exact.
std::string to_record(const EpochRecord& r);

struct TrainResult {
  std::vector<EpochRecord> log;
  int best_epoch = 0;
  double best_dev = -1;
};

// Thrown when the loss stops being finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mini-batch Adam over the training split. Dev accuracy is measured after
// every epoch; the best-dev parameters are restored into `model` at the end.
// Each record is also written to `log` as it is produced.
template <typename T>
TrainResult train(GlanModel<T>& model, const Dataset& dataset, std::ostream* log = nullptr);

double accuracy(std::span<const int> predicted, std::span<const int> gold);

}  // namespace glan
