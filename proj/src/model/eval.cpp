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

#include "glan/model/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "glan/model/trainer.hpp"
#include "glan/parallel.hpp"

namespace glan {

EvalReport metrics(std::span<const int> predicted, std::span<const int> gold, int num_classes) {
  if (predicted.size() != gold.size() || gold.empty()) throw DomainError("metrics: need equal, non-empty inputs");
  const auto C = std::size_t(num_classes);
  EvalReport r;
  r.num_classes = num_classes;
  r.total = gold.size();
  r.confusion.assign(C, std::vector<std::size_t>(C, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= num_classes || predicted[i] < 0 || predicted[i] >= num_classes) {
      throw DomainError("metrics: label outside the " + std::to_string(num_classes) + "-class set");
    }
    ++r.confusion[std::size_t(gold[i])][std::size_t(predicted[i])];
  }
  std::size_t trace = 0;
  for (std::size_t c = 0; c < C; ++c) {
    std::size_t col = 0, row = 0;
    for (std::size_t k = 0; k < C; ++k) {
      col += r.confusion[k][c];
      row += r.confusion[c][k];
    }
    const double tp = double(r.confusion[c][c]);
    ClassMetrics m;
    m.support = row;
    m.precision = col ? tp / double(col) : 0.0;
    m.recall = row ? tp / double(row) : 0.0;
    m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    r.per_class.push_back(m);
    trace += r.confusion[c][c];
  }
  r.accuracy = double(trace) / double(r.total);
  return r;
}

template <typename T>
EvalReport evaluate(const GlanModel<T>& model, const Dataset& dataset, std::span<const data::Cascade> cascades) {
  const GraphContext<T> ctx = make_eval_context<T>(dataset, model.config(), cascades);
  const int offset = int(dataset.split.train.size());
  std::vector<int> targets(cascades.size());
  std::iota(targets.begin(), targets.end(), offset);
  std::vector<int> gold;
  for (const auto& c : cascades) gold.push_back(c.label);
  return metrics(model.predict(ctx, targets).labels, gold, model.num_classes());
}

std::vector<double> default_delays() {
  std::vector<double> out;
  for (double h : {0.0, 1.0, 2.0, 4.0, 8.0, 12.0, 24.0, 36.0}) out.push_back(h * 3600.0);
  return out;
}

template <typename T>
std::vector<EvalReport> early_detection_sweep(const GlanModel<T>& model, const Dataset& dataset,
                                              std::span<const double> delays) {
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (std::isnan(delays[i]) || delays[i] < 0) throw DomainError("early detection: delays must be non-negative");
    if (i > 0 && delays[i] < delays[i - 1]) throw DomainError("early detection: delays must be ascending");
  }
  const std::vector<data::Cascade> test = dataset.cascades(dataset.split.test);
  std::vector<EvalReport> out(delays.size());
  parallel_for(delays.size(), [&](std::size_t i) {
    std::vector<data::Cascade> truncated;
    truncated.reserve(test.size());
    for (const auto& c : test) truncated.push_back(data::time_filter(c, delays[i]));
    out[i] = evaluate(model, dataset, truncated);
    out[i].delay = delays[i];
  });
  return out;
}

template <typename T>
std::vector<AblationRow> ablation_study(const data::Corpus& corpus, const TrainConfig& base,
                                        std::span<const Ablation> modes) {
  const Dataset dataset = prepare_dataset(corpus, base);
  const std::vector<data::Cascade> test = dataset.cascades(dataset.split.test);
  std::vector<AblationRow> rows(modes.size());
  parallel_for(modes.size(), [&](std::size_t i) {
    TrainConfig cfg = base;
    cfg.ablation = modes[i];
    GlanModel<T> model = GlanModel<T>::for_dataset(dataset, cfg);
    const TrainResult result = train(model, dataset);
    rows[i].mode = modes[i];
    rows[i].dev_accuracy = result.best_dev;
    rows[i].test = evaluate(model, dataset, test);
  });
  return rows;
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
  if (name == "tweet_length") return SweepAxis::kTweetLength;
  if (name == "kernel_sizes") return SweepAxis::kKernelSizes;
  return std::nullopt;
}

std::string_view sweep_axis_name(SweepAxis axis) {
  return axis == SweepAxis::kTweetLength ? "tweet_length" : "kernel_sizes";
}

TrainConfig apply_sweep_value(const TrainConfig& base, SweepAxis axis, std::string_view value) {
  TrainConfig cfg = base;
  if (axis == SweepAxis::kTweetLength) {
    cfg.set("length", value);
  } else {
    const std::vector<int> widths = parse_int_list(value);
    if (widths.empty()) throw ConfigError("empty kernel-size list");
    if (cfg.d % int(widths.size()) != 0) {
      throw ConfigError("d=" + std::to_string(cfg.d) + " is not divisible by " + std::to_string(widths.size()) +
                        " kernel sizes");
    }
    cfg.widths = widths;
    cfg.filters_per_width = cfg.d / int(widths.size());
  }
  cfg.validate();
  return cfg;
}

template <typename T>
std::vector<SweepRow> sensitivity_sweep(const data::Corpus& corpus, const TrainConfig& base, SweepAxis axis,
                                        std::span<const std::string> values) {
  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    rows[i].value = values[i];
    TrainConfig cfg;
    try {
      cfg = apply_sweep_value(base, axis, values[i]);
    } catch (const std::invalid_argument& e) {
      rows[i].skipped = true;
      rows[i].reason = e.what();
      return;
    }
    const Dataset dataset = prepare_dataset(corpus, cfg);
    GlanModel<T> model = GlanModel<T>::for_dataset(dataset, cfg);
    const TrainResult result = train(model, dataset);
    rows[i].dev_accuracy = result.best_dev;
    rows[i].test_accuracy = evaluate(model, dataset, dataset.cascades(dataset.split.test)).accuracy;
  });
  return rows;
}

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "table") return ReportFormat::kTable;
  if (name == "records") return ReportFormat::kRecords;
  return std::nullopt;
}

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string delay_text(double seconds) {
  if (std::isinf(seconds)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%gh", seconds / 3600.0);
  return buf;
}

nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json j;
  if (r.delay) j["delay"] = std::isinf(*r.delay) ? nlohmann::json("inf") : nlohmann::json(*r.delay);
  j["total"] = r.total;
  j["accuracy"] = r.accuracy;
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    j["classes"].push_back({{"label", data::label_name(int(c))},
                            {"precision", m.precision},
                            {"recall", m.recall},
                            {"f1", m.f1},
                            {"support", m.support}});
  }
  j["confusion"] = r.confusion;
  return j;
}

std::string mode_title(Ablation a) {
  switch (a) {
    case Ablation::kFull: return "GLAN";
    case Ablation::kNoLre: return "w/o LRE";
    case Ablation::kNoGre: return "w/o GRE";
    case Ablation::kOnlyText: return "Only Text";
  }
  return "?";
}

}  // namespace

std::string format_report(const EvalReport& r, ReportFormat format) {
  if (format == ReportFormat::kRecords) return report_json(r).dump() + "\n";
  std::ostringstream out;
  out << "accuracy " << fixed(r.accuracy) << " over " << r.total << " cascades\n";
  out << "class  precision  recall  f1      support\n";
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-5s  %-9s  %-6s  %-6s  %zu\n", std::string(data::label_name(int(c))).c_str(),
                  fixed(m.precision).c_str(), fixed(m.recall).c_str(), fixed(m.f1).c_str(), m.support);
    out << buf;
  }
  return out.str();
}

std::string format_curve(std::span<const EvalReport> curve, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kRecords) {
    for (const auto& r : curve) out << report_json(r).dump() << '\n';
    return out.str();
  }
  out << "delay_hours  accuracy\n";
  for (const auto& r : curve) {
    const double d = r.delay.value_or(std::numeric_limits<double>::infinity());
    std::string h = std::isinf(d) ? "inf" : delay_text(d);
    if (h.back() == 'h') h.pop_back();
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-11s  %s\n", h.c_str(), fixed(r.accuracy).c_str());
    out << buf;
  }
  return out.str();
}

std::string format_ablation(std::span<const AblationRow> rows, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kRecords) {
    for (const auto& row : rows) {
      nlohmann::json j = report_json(row.test);
      j["mode"] = std::string(ablation_name(row.mode));
      j["dev_accuracy"] = row.dev_accuracy;
      out << j.dump() << '\n';
    }
    return out.str();
  }
  const int classes = rows.empty() ? 2 : rows.front().test.num_classes;
  out << "Method     Acc. ";
  for (int c = 0; c < classes; ++c) {
    const std::string l(data::label_name(c));
    out << " | " << l << " P   " << l << " R   " << l << " F1 ";
  }
  out << '\n';
  for (const auto& row : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-9s  %s", mode_title(row.mode).c_str(), fixed(row.test.accuracy, 3).c_str());
    out << buf;
    for (const auto& m : row.test.per_class) {
      std::snprintf(buf, sizeof buf, " |  %s  %s  %s ", fixed(m.precision, 3).c_str(), fixed(m.recall, 3).c_str(),
                    fixed(m.f1, 3).c_str());
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_sweep(SweepAxis axis, std::span<const SweepRow> rows, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kRecords) {
    for (const auto& r : rows) {
      nlohmann::json j{{"axis", std::string(sweep_axis_name(axis))}, {"value", r.value}, {"skipped", r.skipped}};
      if (r.skipped) {
        j["reason"] = r.reason;
      } else {
        j["dev_accuracy"] = r.dev_accuracy;
        j["test_accuracy"] = r.test_accuracy;
      }
      out << j.dump() << '\n';
    }
    return out.str();
  }
  out << sweep_axis_name(axis) << "  dev_acc  test_acc\n";
  for (const auto& r : rows) {
    char buf[256];
    if (r.skipped) {
      std::snprintf(buf, sizeof buf, "%-12s  skipped: %s\n", r.value.c_str(), r.reason.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "%-12s  %s   %s\n", r.value.c_str(), fixed(r.dev_accuracy).c_str(),
                    fixed(r.test_accuracy).c_str());
    }
    out << buf;
  }
  return out.str();
}

#define GLAN_INSTANTIATE(T)                                                                                    \
  template EvalReport evaluate<T>(const GlanModel<T>&, const Dataset&, std::span<const data::Cascade>);        \
  template std::vector<EvalReport> early_detection_sweep<T>(const GlanModel<T>&, const Dataset&,               \
                                                            std::span<const double>);                          \
  template std::vector<AblationRow> ablation_study<T>(const data::Corpus&, const TrainConfig&,                 \
                                                      std::span<const Ablation>);                              \
  template std::vector<SweepRow> sensitivity_sweep<T>(const data::Corpus&, const TrainConfig&, SweepAxis,      \
                                                      std::span<const std::string>);

GLAN_INSTANTIATE(float)
GLAN_INSTANTIATE(double)

}  // namespace glan
