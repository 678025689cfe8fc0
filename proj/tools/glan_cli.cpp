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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "glan/data/synthetic.hpp"
#include "glan/model/eval.hpp"
#include "glan/model/gradcheck.hpp"
#include "glan/model/run.hpp"
#include "glan/model/trainer.hpp"
#include "glan/numerics/checkpoint.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace glan;

namespace {

struct Common {
  std::string corpus;
  std::string config;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int precision = 0;
  std::string out = "run";
  std::string format = "table";
};

TrainConfig resolve_config(const Common& c) {
  TrainConfig cfg = c.config.empty() ? TrainConfig{} : TrainConfig::load(c.config);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed_set) cfg.seed = c.seed;
  if (c.precision == 32) cfg.precision = Precision::k32;
  if (c.precision == 64) cfg.precision = Precision::k64;
  cfg.validate();
  return cfg;
}

ReportFormat resolve_format(const std::string& name) {
  auto f = parse_format(name);
  if (!f) throw ConfigError("--format must be table or records");
  return *f;
}

std::vector<fs::path> inputs_of(const Common& c) {
  std::vector<fs::path> in{c.corpus};
  if (!c.config.empty()) in.emplace_back(c.config);
  return in;
}

void emit(const fs::path& file, const std::string& text) {
  std::cout << text;
  std::ofstream out(file, std::ios::binary);
  out << text;
}

// Accepts "inf", plain seconds, or a number with an s/m/h suffix.
double parse_delay(std::string text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double scale = 1;
  if (!text.empty() && (text.back() == 'h' || text.back() == 'm' || text.back() == 's')) {
    scale = text.back() == 'h' ? 3600 : text.back() == 'm' ? 60 : 1;
    text.pop_back();
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError("bad delay '" + text + "'");
  return v * scale;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

void print_stats(const data::Corpus& corpus, std::ostream& out) {
  const auto s = data::corpus_stats(corpus);
  out << "source tweets  " << s.source_tweets << '\n'
      << "posts          " << s.posts << '\n'
      << "users          " << s.users << '\n'
      << "classes        " << corpus.num_classes << '\n';
  for (int c = 0; c < corpus.num_classes; ++c) {
    out << "  " << data::label_name(c) << "           " << s.per_class[std::size_t(c)] << '\n';
  }
}

template <typename T>
int run_train(const Common& c, const TrainConfig& cfg) {
  const fs::path out(c.out);
  write_manifest(make_manifest("train", cfg, inputs_of(c), out), out);
  const Dataset dataset = prepare_dataset(data::ingest(c.corpus), cfg);
  GlanModel<T> model = GlanModel<T>::for_dataset(dataset, cfg);
  std::ofstream log(out / kLogFile, std::ios::binary);
  const TrainResult result = train(model, dataset, &log);
  save_run(out, model, dataset);
  const EvalReport test = evaluate(model, dataset, dataset.cascades(dataset.split.test));
  std::printf("epochs %zu, best dev accuracy %.4f at epoch %d, test accuracy %.4f\n", result.log.size(),
              result.best_dev, result.best_epoch, test.accuracy);
  return 0;
}

template <typename T>
int run_eval(const Common& c, const std::string& run_dir, const std::string& predictions) {
  const TrainConfig cfg = load_run_config(run_dir);
  const Dataset dataset = prepare_dataset(data::ingest(c.corpus), cfg);
  const GlanModel<T> model = load_model<T>(run_dir, dataset);
  const auto test = dataset.cascades(dataset.split.test);
  const EvalReport report = evaluate(model, dataset, test);
  emit(fs::path(run_dir) / "eval.txt", format_report(report, resolve_format(c.format)));
  if (!predictions.empty()) {
    const GraphContext<T> ctx = make_eval_context<T>(dataset, cfg, test);
    std::vector<int> targets;
    for (std::size_t i = 0; i < test.size(); ++i) targets.push_back(int(dataset.split.train.size() + i));
    const Predictions p = model.predict(ctx, targets);
    std::ofstream out(predictions, std::ios::binary);
    for (std::size_t i = 0; i < test.size(); ++i) {
      nlohmann::json j{{"id", test[i].source.id},
                       {"label", data::label_name(p.labels[i])},
                       {"gold", data::label_name(test[i].label)},
                       {"probs", p.probs[i]}};
      out << j.dump() << '\n';
    }
  }
  return 0;
}

template <typename T>
int run_early(const Common& c, const std::string& run_dir, const std::vector<double>& delays) {
  const TrainConfig cfg = load_run_config(run_dir);
  const Dataset dataset = prepare_dataset(data::ingest(c.corpus), cfg);
  const GlanModel<T> model = load_model<T>(run_dir, dataset);
  const auto curve = early_detection_sweep(model, dataset, delays);
  emit(fs::path(run_dir) / "early.txt", format_curve(curve, resolve_format(c.format)));
  return 0;
}

template <typename T>
int run_ablate(const Common& c, const TrainConfig& cfg, const std::vector<Ablation>& modes) {
  const fs::path out(c.out);
  write_manifest(make_manifest("ablate", cfg, inputs_of(c), out), out);
  const auto rows = ablation_study<T>(data::ingest(c.corpus), cfg, modes);
  emit(out / "ablation.txt", format_ablation(rows, resolve_format(c.format)));
  return 0;
}

template <typename T>
int run_sweep(const Common& c, const TrainConfig& cfg, SweepAxis axis, const std::vector<std::string>& values) {
  const fs::path out(c.out);
  write_manifest(make_manifest("sweep", cfg, inputs_of(c), out), out);
  const auto rows = sensitivity_sweep<T>(data::ingest(c.corpus), cfg, axis, values);
  emit(out / "sweep.txt", format_sweep(axis, rows, resolve_format(c.format)));
  return 0;
}

void add_common(CLI::App* cmd, Common& c, bool corpus_required) {
  auto* corpus = cmd->add_option("--corpus", c.corpus, "JSON-lines corpus");
  if (corpus_required) corpus->required();
  cmd->add_option("--config", c.config, "key = value config file");
  cmd->add_option("--set", c.overrides, "config override key=value (repeatable)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t s) { c.seed = s, c.seed_set = true; }, "random seed");
  cmd->add_option("--precision", c.precision, "32 or 64")->check(CLI::IsMember({32, 64}));
  cmd->add_option("--out", c.out, "run directory");
  cmd->add_option("--format", c.format, "table or records")->check(CLI::IsMember({"table", "records"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLAN rumor detection: data preparation, training and evaluation"};
  app.require_subcommand(1);
  Common c;

  auto* prepare = app.add_subcommand("prepare", "validate a corpus and report statistics");
  std::string graph_out;
  add_common(prepare, c, true);
  prepare->add_option("--graph-out", graph_out, "write the user-tweet edge list here");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  data::SyntheticConfig sc;
  synth->add_option("--n-cascades", sc.n_cascades);
  synth->add_option("--n-users", sc.n_users);
  synth->add_option("--vocab-size", sc.vocab_size);
  synth->add_option("--num-classes", sc.num_classes);
  synth->add_option("--min-retweets", sc.min_retweets);
  synth->add_option("--max-retweets", sc.max_retweets);
  synth->add_option("--text-length", sc.text_length);
  synth->add_option("--mean-retweet-delay", sc.mean_retweet_delay, "seconds");
  bool structure = false, text = false, no_structure = false;
  synth->add_flag("--structure-signal", structure);
  synth->add_flag("--no-structure-signal", no_structure);
  synth->add_flag("--text-signal", text);
  synth->add_flag("--user-features", sc.user_features);
  synth->add_option("--seed", sc.seed);
  synth->add_option("--out", c.out, "output directory");

  auto* train_cmd = app.add_subcommand("train", "train a model and save a run directory");
  add_common(train_cmd, c, true);
  std::string ablation;
  train_cmd->add_option("--ablation", ablation, "full, no_lre, no_gre or only_text");

  std::string run_dir, predictions;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a run on the test split");
  add_common(eval_cmd, c, true);
  eval_cmd->add_option("--run", run_dir, "run directory from train")->required();
  eval_cmd->add_option("--predictions", predictions, "write per-cascade predictions (JSON lines)");

  std::string delays_text;
  auto* early = app.add_subcommand("early", "early-detection accuracy over detection delays");
  add_common(early, c, true);
  early->add_option("--run", run_dir, "run directory from train")->required();
  early->add_option("--delays", delays_text, "comma-separated delays: seconds, or with s/m/h suffix, or inf");

  std::string modes_text = "full,no_lre,no_gre,only_text";
  auto* ablate = app.add_subcommand("ablate", "train and compare ablation modes");
  add_common(ablate, c, true);
  ablate->add_option("--modes", modes_text, "comma-separated modes");

  std::string axis_text, values_text;
  auto* sweep = app.add_subcommand("sweep", "parameter sensitivity sweep");
  add_common(sweep, c, true);
  sweep->add_option("--axis", axis_text, "tweet_length or kernel_sizes")->required();
  sweep->add_option("--values", values_text, "values separated by ';' (',' inside a kernel combination)")->required();

  auto* gradcheck = app.add_subcommand("gradcheck", "end-to-end finite-difference gradient check");
  std::uint64_t gc_seed = 3;
  gradcheck->add_option("--seed", gc_seed, "synthetic corpus seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (prepare->parsed()) {
      const data::Corpus corpus = data::ingest(c.corpus);
      print_stats(corpus, std::cout);
      if (!graph_out.empty()) {
        std::ofstream out(graph_out, std::ios::binary);
        data::write_edge_list(out, data::build_graph(corpus.cascades, corpus.users));
        if (!out) throw FormatError("cannot write " + graph_out);
      }
      return 0;
    }
    if (synth->parsed()) {
      if (no_structure) sc.structure_signal = false;
      else if (structure) sc.structure_signal = true;
      sc.text_signal = text;
      const data::Corpus corpus = data::generate_synthetic(sc);
      fs::create_directories(c.out);
      const fs::path path = fs::path(c.out) / "corpus.jsonl";
      data::save_corpus(path, corpus);
      std::cout << "wrote " << path.string() << '\n';
      print_stats(corpus, std::cout);
      return 0;
    }
    if (gradcheck->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const GradCheckReport r = end_to_end_grad_check(grad_check_config(), gc_seed);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::printf("%s: max relative error %.3e (%s[%zu]), %zu entries checked, %zu flagged, %.1f s\n",
                  r.passed() ? "pass" : "FAIL", r.max_rel_error, r.worst_param.c_str(), r.worst_index, r.checked,
                  r.flagged, secs);
      if (!r.valid) std::printf("%s\n", r.message.c_str());
      return r.passed() ? 0 : 1;
    }
    if (eval_cmd->parsed() || early->parsed()) {
      const bool wide = checkpoint::stored_precision(fs::path(run_dir) / kCheckpointFile) == 8;
      if (eval_cmd->parsed()) return wide ? run_eval<double>(c, run_dir, predictions) : run_eval<float>(c, run_dir, predictions);
      std::vector<double> delays;
      for (const auto& d : split(delays_text, ',')) delays.push_back(parse_delay(d));
      if (delays_text.empty()) delays = default_delays();
      return wide ? run_early<double>(c, run_dir, delays) : run_early<float>(c, run_dir, delays);
    }

    TrainConfig cfg = resolve_config(c);
    const bool wide = cfg.precision == Precision::k64;
    if (train_cmd->parsed()) {
      if (!ablation.empty()) {
        auto a = parse_ablation(ablation);
        if (!a) throw ConfigError("unknown ablation " + ablation);
        cfg.ablation = *a;
      }
      return wide ? run_train<double>(c, cfg) : run_train<float>(c, cfg);
    }
    if (ablate->parsed()) {
      std::vector<Ablation> modes;
      for (const auto& m : split(modes_text, ',')) {
        auto a = parse_ablation(m);
        if (!a) throw ConfigError("unknown ablation mode " + m);
        modes.push_back(*a);
      }
      return wide ? run_ablate<double>(c, cfg, modes) : run_ablate<float>(c, cfg, modes);
    }
    if (sweep->parsed()) {
      auto axis = parse_sweep_axis(axis_text);
      if (!axis) throw ConfigError("--axis must be tweet_length or kernel_sizes");
      const auto values = split(values_text, ';');
      return wide ? run_sweep<double>(c, cfg, *axis, values) : run_sweep<float>(c, cfg, *axis, values);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
