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

#include "glan/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "glan/numerics/adam.hpp"

namespace glan {

std::string to_record(const EpochRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"epoch\":%d,\"train_loss\":%.17g,\"train_accuracy\":%.17g,\"dev_accuracy\":%.17g,\"lr\":%.17g,"
                "\"clamped\":%zu}",
                r.epoch, r.train_loss, r.train_accuracy, r.dev_accuracy, r.lr, r.clamped);
  return buf;
}

double accuracy(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size() || gold.empty()) throw DomainError("accuracy: size mismatch or empty input");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hit += predicted[i] == gold[i];
  return double(hit) / double(gold.size());
}

template <typename T>
TrainResult train(GlanModel<T>& model, const Dataset& dataset, std::ostream* log) {
  const TrainConfig& cfg = model.config();
  const GraphContext<T> train_ctx = make_context<T>(dataset, cfg, dataset.cascades(dataset.split.train));
  const std::vector<data::Cascade> dev = dataset.cascades(dataset.split.dev);
  const GraphContext<T> dev_ctx = make_eval_context<T>(dataset, cfg, dev);

  const int n_train = int(dataset.split.train.size());
  std::vector<int> train_targets(static_cast<std::size_t>(n_train));
  std::iota(train_targets.begin(), train_targets.end(), 0);
  std::vector<int> dev_targets(dev.size());
  std::iota(dev_targets.begin(), dev_targets.end(), n_train);
  const std::vector<int> train_gold = train_ctx.labels();
  std::vector<int> dev_gold;
  for (const auto& c : dev) dev_gold.push_back(c.label);

  ParamStore<T>& store = model.params();
  std::vector<Parameter<T>*> params = store.all();
  Adam<T> adam(AdamConfig{cfg.lr, cfg.beta1, cfg.beta2, cfg.epsilon});
  Rng rng(cfg.seed ^ 0x5eedf00dULL);

  TrainResult result;
  ParamStore<T> best = store;
  double lr = cfg.lr;
  int stale = 0;
  std::vector<int> order = train_targets;
  const auto batch = std::size_t(cfg.batch);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    double total = 0;
    for (std::size_t lo = 0, b = 0; lo < order.size(); lo += batch, ++b) {
      const std::span<const int> targets(order.data() + lo, std::min(batch, order.size() - lo));
      std::vector<int> gold;
      for (int t : targets) gold.push_back(train_gold[std::size_t(t)]);

      Tape<T> tape;
      const auto out = model.forward(tape, train_ctx, targets);
      const Var loss = ops::nll_loss(tape, out.probs, gold, cfg.mean_loss);
      const double value = double(tape.value(loss)[0]);
      if (!std::isfinite(value)) {
        throw DivergenceError("loss is not finite at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(b) + " (first target " + train_ctx.cascades[std::size_t(targets[0])].source.id +
                              ")");
      }
      const Tensor<T>& p = tape.value(out.probs);
      for (std::size_t i = 0; i < gold.size(); ++i) rec.clamped += double(p(i, std::size_t(gold[i]))) < 1e-12;
      total += cfg.mean_loss ? value * double(targets.size()) : value;

      store.zero_grad();
      tape.backward(loss);
      Tensor<T>& g = model.text.embedding->grad;
      if (!g.empty()) std::fill_n(g.data(), g.cols(), T(0));
      adam.step(params);
    }
    rec.train_loss = total / double(order.size());
    rec.train_accuracy = accuracy(model.predict(train_ctx, train_targets).labels, train_gold);
    rec.dev_accuracy = accuracy(model.predict(dev_ctx, dev_targets).labels, dev_gold);
    result.log.push_back(rec);
    if (log) *log << to_record(rec) << '\n' << std::flush;

    if (rec.dev_accuracy > result.best_dev) {
      result.best_dev = rec.dev_accuracy;
      result.best_epoch = epoch;
      best.assign_values(store);
      stale = 0;
    } else {
      ++stale;
      if (stale % cfg.decay_patience == 0) {
        lr = std::max(lr * cfg.lr_decay, cfg.min_lr);
        adam.set_learning_rate(lr);
      }
      if (stale >= cfg.patience) break;
    }
  }
  store.assign_values(best);
  store.zero_grad();
  return result;
}

template TrainResult train<float>(GlanModel<float>&, const Dataset&, std::ostream*);
template TrainResult train<double>(GlanModel<double>&, const Dataset&, std::ostream*);

}  // namespace glan
