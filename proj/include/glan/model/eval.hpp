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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glan/model/model.hpp"

namespace glan {

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;  // gold instances
};

struct EvalReport {
  int num_classes = 2;
  std::size_t total = 0;
  double accuracy = 0;
  std::vector<ClassMetrics> per_class;
  std::vector<std::vector<std::size_t>> confusion;  // [gold][predicted]
  std::optional<double> delay;                      // seconds, for early-detection points
};

// One-vs-rest precision/recall/F1; zero denominators give 0. Labels outside
// [0, num_classes) are a DomainError.
EvalReport metrics(std::span<const int> predicted, std::span<const int> gold, int num_classes);

// Classifies `cascades` in a graph made of the training cascades plus them.
template <typename T>
EvalReport evaluate(const GlanModel<T>& model, const Dataset& dataset, std::span<const data::Cascade> cascades);

// Test split evaluated after truncating each test cascade to the retweets
// posted within each delay. The full-data checkpoint is reused for every
// delay. Delays must be ascending and non-negative (infinity allowed).
template <typename T>
std::vector<EvalReport> early_detection_sweep(const GlanModel<T>& model, const Dataset& dataset,
                                              std::span<const double> delays);

std::vector<double> default_delays();  // 0, 1, 2, 4, 8, 12, 24, 36 hours in seconds

struct AblationRow {
  Ablation mode = Ablation::kFull;
  double dev_accuracy = 0;
  EvalReport test;
};

// Trains one model per mode from the same base config and corpus.
template <typename T>
std::vector<AblationRow> ablation_study(const data::Corpus& corpus, const TrainConfig& base,
                                        std::span<const Ablation> modes);

enum class SweepAxis { kTweetLength, kKernelSizes };
std::optional<SweepAxis> parse_sweep_axis(std::string_view name);
std::string_view sweep_axis_name(SweepAxis axis);

struct SweepRow {
  std::string value;
  bool skipped = false;
  std::string reason;
  double dev_accuracy = 0;
  double test_accuracy = 0;
};

// Applies one sweep value to a config: a single length, or a kernel-size
// list such as "3,4,5" (filters per width become d / count). Throws
// ConfigError when the value does not fit the base dimensions.
TrainConfig apply_sweep_value(const TrainConfig& base, SweepAxis axis, std::string_view value);

// Trains one model per value with the base seed; values that do not fit are
// reported as skipped rows.
template <typename T>
std::vector<SweepRow> sensitivity_sweep(const data::Corpus& corpus, const TrainConfig& base, SweepAxis axis,
                                        std::span<const std::string> values);

enum class ReportFormat { kTable, kRecords };
std::optional<ReportFormat> parse_format(std::string_view name);

std::string format_report(const EvalReport& report, ReportFormat format);
std::string format_curve(std::span<const EvalReport> curve, ReportFormat format);
std::string format_ablation(std::span<const AblationRow> rows, ReportFormat format);
std::string format_sweep(SweepAxis axis, std::span<const SweepRow> rows, ReportFormat format);

}  // namespace glan
