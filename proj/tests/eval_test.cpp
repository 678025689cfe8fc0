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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "glan/data/synthetic.hpp"
#include "glan/errors.hpp"
#include "glan/model/eval.hpp"
#include "glan/model/trainer.hpp"

using namespace glan;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TrainConfig tiny_config() {
  TrainConfig cfg = TrainConfig::small();
  cfg.d = 12;
  cfg.filters_per_width = 4;
  cfg.heads = 2;
  cfg.global_heads = 2;
  cfg.user_dim = 6;
  cfg.length = 8;
  cfg.min_count = 1;
  cfg.batch = 16;
  cfg.max_epochs = 4;
  cfg.precision = Precision::k64;
  return cfg;
}

data::Corpus small_corpus(int n = 48) {
  data::SyntheticConfig s;
  s.n_cascades = n;
  s.n_users = 24;
  s.seed = 5;
  return data::generate_synthetic(s);
}

}  // namespace

TEST(Metrics, AllCorrect) {
  const std::vector<int> y{0, 1, 1, 0, 1};
  const EvalReport r = metrics(y, y, 2);
  EXPECT_EQ(r.accuracy, 1.0);
  for (const auto& c : r.per_class) EXPECT_EQ(c.f1, 1.0);
}

TEST(Metrics, HandConfusionExample) {
  // FR = 1, NR = 0
  const std::vector<int> gold{1, 1, 0, 0}, pred{1, 0, 0, 0};
  const EvalReport r = metrics(pred, gold, 2);
  EXPECT_EQ(r.accuracy, 0.75);
  EXPECT_EQ(r.per_class[1].precision, 1.0);
  EXPECT_EQ(r.per_class[1].recall, 0.5);
  EXPECT_NEAR(r.per_class[1].f1, 2.0 / 3, 1e-15);
  EXPECT_NEAR(r.per_class[0].precision, 2.0 / 3, 1e-15);
  EXPECT_EQ(r.per_class[0].recall, 1.0);
  EXPECT_NEAR(r.per_class[0].f1, 0.8, 1e-15);
  EXPECT_EQ(r.confusion[1][0], 1u);
  EXPECT_EQ(r.confusion[0][0], 2u);
}

TEST(Metrics, UnpredictedClassHasZeroPrecision) {
  const std::vector<int> gold{0, 1, 2, 3}, pred{0, 0, 0, 0};
  const EvalReport r = metrics(pred, gold, 4);
  EXPECT_EQ(r.per_class[2].precision, 0.0);
  EXPECT_EQ(r.per_class[2].f1, 0.0);
  EXPECT_EQ(r.per_class[0].precision, 0.25);
}

TEST(Metrics, Errors) {
  const std::vector<int> a{0, 2}, b{0, 1}, c{0};
  EXPECT_THROW(metrics(a, b, 2), DomainError);
  EXPECT_THROW(metrics(c, b, 2), DomainError);
  EXPECT_THROW(metrics(std::span<const int>{}, std::span<const int>{}, 2), DomainError);
}

TEST(Metrics, PropertyInvariantsAndPermutation) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int classes = trial % 2 ? 2 : 4;
    const std::size_t n = 1 + gen() % 40;
    std::vector<int> gold(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) gold[i] = int(gen() % classes), pred[i] = int(gen() % classes);
    const EvalReport r = metrics(pred, gold, classes);
    std::size_t total = 0, trace = 0;
    for (int g = 0; g < classes; ++g)
      for (int p = 0; p < classes; ++p) {
        total += r.confusion[std::size_t(g)][std::size_t(p)];
        if (g == p) trace += r.confusion[std::size_t(g)][std::size_t(p)];
      }
    EXPECT_EQ(total, n);
    EXPECT_DOUBLE_EQ(r.accuracy, double(trace) / double(n));
    double micro_recall_num = 0;
    for (int c = 0; c < classes; ++c) {
      const auto& m = r.per_class[std::size_t(c)];
      micro_recall_num += m.recall * double(m.support);
      if (m.precision + m.recall > 0) {
        EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
      } else {
        EXPECT_EQ(m.f1, 0.0);
      }
    }
    EXPECT_NEAR(micro_recall_num / double(n), r.accuracy, 1e-12);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<int> gp, pp;
    for (std::size_t i : perm) gp.push_back(gold[i]), pp.push_back(pred[i]);
    const EvalReport q = metrics(pp, gp, classes);
    EXPECT_EQ(q.confusion, r.confusion);
    EXPECT_EQ(q.accuracy, r.accuracy);
    for (int c = 0; c < classes; ++c) EXPECT_EQ(q.per_class[std::size_t(c)].f1, r.per_class[std::size_t(c)].f1);
  }
}

TEST(EarlyDetection, InfiniteDelayReproducesPlainEvaluation) {
  const TrainConfig cfg = tiny_config();
  const Dataset ds = prepare_dataset(small_corpus(), cfg);
  auto model = GlanModel<double>::for_dataset(ds, cfg);
  train(model, ds);
  const EvalReport plain = evaluate(model, ds, ds.cascades(ds.split.test));
  const std::vector<double> delays{kInf};
  const auto curve = early_detection_sweep(model, ds, delays);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_EQ(curve[0].accuracy, plain.accuracy);
  EXPECT_EQ(curve[0].confusion, plain.confusion);
  EXPECT_EQ(*curve[0].delay, kInf);
}

TEST(EarlyDetection, ZeroDelayRunsAndDelaysAreValidated) {
  const TrainConfig cfg = tiny_config();
  const Dataset ds = prepare_dataset(small_corpus(), cfg);
  const auto model = GlanModel<double>::for_dataset(ds, cfg);
  const std::vector<double> grid{0, 3600, 4 * 3600.0, kInf};
  const auto curve = early_detection_sweep(model, ds, grid);
  ASSERT_EQ(curve.size(), 4u);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_EQ(*curve[i].delay, grid[i]);
    EXPECT_EQ(curve[i].total, ds.split.test.size());
  }
  const std::vector<double> descending{3600, 0}, negative{-1};
  EXPECT_THROW(early_detection_sweep(model, ds, descending), DomainError);
  EXPECT_THROW(early_detection_sweep(model, ds, negative), DomainError);
  const auto defaults = default_delays();
  EXPECT_EQ(defaults.size(), 8u);
  EXPECT_EQ(defaults.front(), 0.0);
  EXPECT_EQ(defaults.back(), 36 * 3600.0);
}

TEST(Sweep, ApplyValues) {
  TrainConfig base = TrainConfig::small();
  const TrainConfig len = apply_sweep_value(base, SweepAxis::kTweetLength, "5");
  EXPECT_EQ(len.length, 5);
  const TrainConfig one = apply_sweep_value(base, SweepAxis::kKernelSizes, "1");
  EXPECT_EQ(one.widths, std::vector<int>{1});
  EXPECT_EQ(one.filters_per_width, base.d);
  const TrainConfig ref = apply_sweep_value(base, SweepAxis::kKernelSizes, "3,4,5");
  EXPECT_EQ(ref.filters_per_width * 3, base.d);
  base.d = 20;
  base.heads = 4;
  base.global_heads = 4;
  EXPECT_THROW(apply_sweep_value(base, SweepAxis::kKernelSizes, "3,4,5"), ConfigError);
  EXPECT_EQ(parse_sweep_axis("tweet_length"), SweepAxis::kTweetLength);
  EXPECT_EQ(parse_sweep_axis("kernel_sizes"), SweepAxis::kKernelSizes);
  EXPECT_FALSE(parse_sweep_axis("depth"));
}

TEST(Sweep, IncompatibleValuesAreSkippedAndTableStillEmitted) {
  TrainConfig cfg = tiny_config();
  cfg.max_epochs = 1;
  const std::vector<std::string> values{"1", "3,4,5", "3,4,5,6,7"};
  const auto rows = sensitivity_sweep<double>(small_corpus(32), cfg, SweepAxis::kKernelSizes, values);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].skipped);
  EXPECT_FALSE(rows[1].skipped);
  EXPECT_TRUE(rows[2].skipped);
  EXPECT_FALSE(rows[2].reason.empty());
  const std::string table = format_sweep(SweepAxis::kKernelSizes, rows, ReportFormat::kTable);
  EXPECT_NE(table.find("3,4,5"), std::string::npos);
  EXPECT_NE(table.find("skipped"), std::string::npos);
  const std::vector<std::string> lengths{"2"};
  const auto short_rows = sensitivity_sweep<double>(small_corpus(32), cfg, SweepAxis::kTweetLength, lengths);
  EXPECT_TRUE(short_rows[0].skipped);  // shorter than the widest kernel
}

TEST(Ablation, FourRowTableInFixedOrder) {
  TrainConfig cfg = tiny_config();
  cfg.max_epochs = 1;
  const std::vector<Ablation> modes{Ablation::kFull, Ablation::kNoLre, Ablation::kNoGre, Ablation::kOnlyText};
  const auto rows = ablation_study<double>(small_corpus(32), cfg, modes);
  ASSERT_EQ(rows.size(), 4u);
  const std::string table = format_ablation(rows, ReportFormat::kTable);
  const auto glan = table.find("GLAN"), no_lre = table.find("w/o LRE"), no_gre = table.find("w/o GRE"),
             text = table.find("Only Text");
  ASSERT_NE(text, std::string::npos);
  EXPECT_LT(glan, no_lre);
  EXPECT_LT(no_lre, no_gre);
  EXPECT_LT(no_gre, text);
  const std::string records = format_ablation(rows, ReportFormat::kRecords);
  EXPECT_EQ(std::count(records.begin(), records.end(), '\n'), 4);
}

TEST(Format, ReportAndCurve) {
  const std::vector<int> gold{1, 1, 0, 0}, pred{1, 0, 0, 0};
  EvalReport r = metrics(pred, gold, 2);
  const std::string table = format_report(r, ReportFormat::kTable);
  EXPECT_NE(table.find("0.7500"), std::string::npos);
  EXPECT_NE(table.find("NR"), std::string::npos);
  EXPECT_NE(table.find("FR"), std::string::npos);
  const std::string rec = format_report(r, ReportFormat::kRecords);
  EXPECT_NE(rec.find("\"accuracy\":0.75"), std::string::npos);
  r.delay = 3600;
  const std::vector<EvalReport> curve{r};
  EXPECT_NE(format_curve(curve, ReportFormat::kTable).find("1"), std::string::npos);
  EXPECT_NE(format_curve(curve, ReportFormat::kRecords).find("3600"), std::string::npos);
  EXPECT_EQ(parse_format("table"), ReportFormat::kTable);
  EXPECT_EQ(parse_format("records"), ReportFormat::kRecords);
  EXPECT_FALSE(parse_format("xml"));
}
