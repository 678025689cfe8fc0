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

#include "glan/model/model.hpp"

#include <algorithm>
#include <numeric>

namespace glan {

template <typename T>
GlanModel<T>::GlanModel(const TrainConfig& cfg, std::size_t vocab_size, int num_classes, std::size_t free_tweets,
                        std::size_t free_users)
    : cfg_(cfg), num_classes_(num_classes) {
  cfg.validate();
  if (num_classes != 2 && num_classes != 4) throw ConfigError("the classifier supports 2 or 4 classes");
  const auto d = static_cast<std::size_t>(cfg.d);
  Rng rng(cfg.seed);
  text = TextEncoder<T>::create(store_, vocab_size, d, cfg.widths, std::size_t(cfg.filters_per_width), cfg.init_range,
                                rng);
  local = LocalParams<T>::create(store_, d, std::size_t(cfg.heads), cfg.init_range, rng);
  global = GlobalParams<T>::create(store_, free_tweets, free_users, d, std::size_t(cfg.user_dim),
                                   std::size_t(cfg.global_heads), std::size_t(cfg.layers), cfg.init_range, rng);
  cls_w = &store_.add("classifier.w", uniform_tensor<T>({2 * d, std::size_t(num_classes)}, cfg.init_range, rng));
  cls_b = &store_.add("classifier.b", uniform_tensor<T>({1, std::size_t(num_classes)}, cfg.init_range, rng));
}

template <typename T>
GlanModel<T> GlanModel<T>::for_dataset(const Dataset& dataset, const TrainConfig& cfg) {
  return GlanModel(cfg, dataset.vocab.size(), dataset.num_classes, dataset.free_tweets(), dataset.free_users());
}

template <typename T>
void GlanModel<T>::load_values(const ParamStore<T>& other) {
  if (other.size() != store_.size()) {
    throw FormatError("checkpoint holds " + std::to_string(other.size()) + " tensors, model expects " +
                      std::to_string(store_.size()));
  }
  for (std::size_t i = 0; i < store_.size(); ++i) {
    const auto& mine = store_[i];
    const auto& theirs = other[i];
    if (mine.name != theirs.name || !mine.value.same_shape(theirs.value)) {
      throw FormatError("checkpoint tensor " + theirs.name + " " + shape_string(theirs.value.shape()) +
                        " does not match " + mine.name + " " + shape_string(mine.value.shape()));
    }
  }
  store_.assign_values(other);
}

template <typename T>
Var GlanModel<T>::local_representations(Tape<T>& tape, const GraphContext<T>& ctx,
                                        std::span<const int> tweets) const {
  const auto L = static_cast<std::size_t>(cfg_.length);
  std::vector<int> source_ids, retweet_ids;
  std::vector<std::size_t> first(tweets.size()), count(tweets.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const EncodedCascade& e = ctx.encoded.at(std::size_t(tweets[i]));
    source_ids.insert(source_ids.end(), e.source.begin(), e.source.end());
    first[i] = total;
    count[i] = e.n_retweets;
    total += e.n_retweets;
    retweet_ids.insert(retweet_ids.end(), e.retweets.begin(), e.retweets.end());
  }
  const Var m = encode_microblogs(tape, text, source_ids, L);
  if (!uses_local(cfg_.ablation) || total == 0) return m;

  const Var r_all = encode_microblogs(tape, text, retweet_ids, L);
  const AttentionOptions options{cfg_.per_head_scale};
  std::vector<Var> rows;
  rows.reserve(tweets.size());
  std::vector<int> idx;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const int self = int(i);
    const Var mi = ops::gather_rows(tape, m, std::span<const int>(&self, 1));
    if (count[i] == 0) {
      rows.push_back(mi);
      continue;
    }
    idx.resize(count[i]);
    std::iota(idx.begin(), idx.end(), int(first[i]));
    const Var ri = ops::gather_rows(tape, r_all, idx);
    rows.push_back(encode_local(tape, mi, ri, local, {}, options));
  }
  return rows.size() == 1 ? rows[0] : ops::concat_rows<T>(tape, rows);
}

template <typename T>
Var classify(Tape<T>& tape, Var local, Var global, Var w, Var b) {
  const Var parts[2] = {local, global};
  const Var logits = ops::add_row(tape, ops::matmul(tape, ops::concat_cols<T>(tape, parts), w), b);
  return ops::softmax_rows(tape, logits);
}

template <typename T>
typename GlanModel<T>::Output GlanModel<T>::forward(Tape<T>& tape, const GraphContext<T>& ctx,
                                                    std::span<const int> targets) const {
  if (targets.empty()) throw DomainError("forward: no target tweets");
  const auto d = static_cast<std::size_t>(cfg_.d);
  Output out;
  if (!uses_global(cfg_.ablation)) {
    out.local = local_representations(tape, ctx, targets);
    out.global = tape.constant(Tensor<T>({targets.size(), d}));
  } else {
    const GlobalPlan plan = plan_global(ctx.graph, targets, {}, std::size_t(cfg_.layers),
                                        std::size_t(cfg_.neighbor_cap));
    // One local pass over every tweet the graph touches, targets included.
    std::vector<int> nodes(targets.begin(), targets.end());
    nodes.insert(nodes.end(), plan.tweets[0].begin(), plan.tweets[0].end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    auto row_of = [&](int node) { return int(std::lower_bound(nodes.begin(), nodes.end(), node) - nodes.begin()); };
    const Var mtilde = local_representations(tape, ctx, nodes);

    std::vector<int> rows;
    for (int t : targets) rows.push_back(row_of(t));
    out.local = ops::gather_rows(tape, mtilde, rows);

    Var tweets0, users0;
    if (!plan.tweets[0].empty()) {
      rows.clear();
      std::vector<int> free_rows;
      for (int t : plan.tweets[0]) {
        rows.push_back(row_of(t));
        free_rows.push_back(ctx.tweet_rows[std::size_t(t)]);
      }
      const Var composed = compose_nodes(tape, tape.param(*global.m0), free_rows, ops::gather_rows(tape, mtilde, rows));
      tweets0 = project(tape, composed, tape.param(*global.wm));
    }
    if (!plan.users[0].empty()) {
      const std::size_t du = ctx.user_features.cols();
      Tensor<T> feats({plan.users[0].size(), du});
      std::vector<int> free_rows;
      for (std::size_t i = 0; i < plan.users[0].size(); ++i) {
        const auto u = std::size_t(plan.users[0][i]);
        free_rows.push_back(ctx.user_rows[u]);
        std::copy_n(ctx.user_features.data() + u * du, du, feats.data() + i * du);
      }
      const Var composed = compose_nodes(tape, tape.param(*global.u0), free_rows, tape.constant(std::move(feats)));
      users0 = project(tape, composed, tape.param(*global.wu));
    }
    out.global = encode_global(tape, plan, global, tweets0, users0).tweets;
  }
  out.probs = classify(tape, out.local, out.global, tape.param(*cls_w), tape.param(*cls_b));
  return out;
}

template <typename T>
std::vector<int> argmax_rows_impl(const Tensor<T>& p) {
  std::vector<int> out;
  out.reserve(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.cols(); ++c)
      if (p(i, c) > p(i, best)) best = c;
    out.push_back(int(best));
  }
  return out;
}

std::vector<int> argmax_rows(const Tensor<float>& probs) { return argmax_rows_impl(probs); }
std::vector<int> argmax_rows(const Tensor<double>& probs) { return argmax_rows_impl(probs); }

template <typename T>
Predictions GlanModel<T>::predict(const GraphContext<T>& ctx, std::span<const int> targets) const {
  Tape<T> tape(false);
  const Tensor<T>& p = tape.value(forward(tape, ctx, targets).probs);
  Predictions out;
  out.labels = argmax_rows(p);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    const auto row = p.row_span(i);
    out.probs.emplace_back(row.begin(), row.end());
  }
  return out;
}

template class GlanModel<float>;
template class GlanModel<double>;
template Var classify<float>(Tape<float>&, Var, Var, Var, Var);
template Var classify<double>(Tape<double>&, Var, Var, Var, Var);

}  // namespace glan
