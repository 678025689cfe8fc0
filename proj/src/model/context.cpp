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

#include "glan/model/context.hpp"

#include <cmath>
#include <random>

#include "glan/errors.hpp"

namespace glan {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

double signed_log(double x) { return std::copysign(std::log1p(std::fabs(x)), x); }

}  // namespace

UserFeatures::UserFeatures(const data::Corpus& corpus, std::span<const std::string> train_users, std::size_t dim,
                           std::uint64_t seed)
    : dim_(dim), seed_(seed), mean_(dim, 0.0), scale_(dim, 1.0) {
  for (const auto& u : corpus.users) {
    if (!u.features) continue;
    if (u.features->size() > dim) {
      throw ConfigError("user " + u.id + " has " + std::to_string(u.features->size()) +
                        " features but d_u = " + std::to_string(dim));
    }
    std::vector<double> f(dim, 0.0);
    for (std::size_t i = 0; i < u.features->size(); ++i) {
      const double x = (*u.features)[i];
      if (!std::isfinite(x)) throw FormatError("user " + u.id + " has a non-finite feature");
      f[i] = signed_log(x);
    }
    supplied_.emplace(u.id, std::move(f));
  }
  std::vector<double> sum(dim, 0.0), sq(dim, 0.0);
  std::size_t count = 0;
  for (const auto& id : train_users) {
    auto it = supplied_.find(id);
    if (it == supplied_.end()) continue;
    ++count;
    for (std::size_t i = 0; i < dim; ++i) {
      sum[i] += it->second[i];
      sq[i] += it->second[i] * it->second[i];
    }
  }
  if (count == 0) return;
  for (std::size_t i = 0; i < dim; ++i) {
    mean_[i] = sum[i] / double(count);
    const double var = std::max(0.0, sq[i] / double(count) - mean_[i] * mean_[i]);
    scale_[i] = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
  }
}

std::vector<double> UserFeatures::of(const std::string& user) const {
  auto it = supplied_.find(user);
  std::vector<double> out(dim_);
  if (it != supplied_.end()) {
    for (std::size_t i = 0; i < dim_; ++i) out[i] = (it->second[i] - mean_[i]) * scale_[i];
    return out;
  }
  std::mt19937_64 rng(fnv1a(user, seed_ ^ 0x9e3779b97f4a7c15ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : out) v = normal(rng);
  return out;
}

EncodedCascade encode_cascade(const data::Cascade& cascade, const data::Vocabulary& vocab, int length,
                              std::size_t max_retweets) {
  EncodedCascade e;
  e.label = cascade.label;
  e.source = data::encode_text(cascade.source.tokens, vocab, length);
  const std::size_t n = cascade.retweets.size();
  const std::size_t first = n > max_retweets ? n - max_retweets : 0;
  for (std::size_t i = first; i < n; ++i) {
    const auto ids = data::encode_text(cascade.retweets[i].tokens, vocab, length);
    e.retweets.insert(e.retweets.end(), ids.begin(), ids.end());
  }
  e.n_retweets = n - first;
  return e;
}

std::vector<data::Cascade> Dataset::cascades(std::span<const std::size_t> indices) const {
  std::vector<data::Cascade> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(corpus.cascades.at(i));
  return out;
}

Dataset prepare_dataset(data::Corpus corpus, const TrainConfig& cfg) {
  cfg.validate();
  Dataset ds;
  ds.corpus = std::move(corpus);
  ds.num_classes = ds.corpus.num_classes;
  ds.split = data::split_dataset(ds.corpus.cascades, cfg.seed);
  const std::vector<data::Cascade> train = ds.cascades(ds.split.train);
  ds.vocab = data::build_vocab(std::span<const data::Cascade>(train), cfg.min_count);
  for (std::size_t i = 0; i < train.size(); ++i) ds.tweet_rows.emplace(train[i].source.id, int(i));
  const data::HeteroGraph graph = data::build_graph(train, ds.corpus.users);
  for (std::size_t u = 0; u < graph.num_users(); ++u) ds.user_rows.emplace(graph.user_ids()[u], int(u));
  ds.features = UserFeatures(ds.corpus, graph.user_ids(), std::size_t(cfg.user_dim), cfg.seed);
  return ds;
}

template <typename T>
std::vector<int> GraphContext<T>::labels() const {
  std::vector<int> out;
  out.reserve(cascades.size());
  for (const auto& c : cascades) out.push_back(c.label);
  return out;
}

template <typename T>
GraphContext<T> make_context(const Dataset& dataset, const TrainConfig& cfg, std::vector<data::Cascade> cascades) {
  if (cascades.empty()) throw DomainError("make_context: no cascades");
  GraphContext<T> ctx;
  ctx.cascades = std::move(cascades);
  ctx.graph = data::build_graph(ctx.cascades, dataset.corpus.users);
  ctx.encoded.reserve(ctx.cascades.size());
  for (const auto& c : ctx.cascades) {
    ctx.encoded.push_back(encode_cascade(c, dataset.vocab, cfg.length, std::size_t(cfg.max_retweets)));
    auto it = dataset.tweet_rows.find(c.source.id);
    ctx.tweet_rows.push_back(it == dataset.tweet_rows.end() ? -1 : it->second);
  }
  const std::size_t users = ctx.graph.num_users();
  const std::size_t du = dataset.features.dim();
  ctx.user_features = Tensor<T>({users, du});
  for (std::size_t u = 0; u < users; ++u) {
    const std::string& id = ctx.graph.user_ids()[u];
    auto it = dataset.user_rows.find(id);
    ctx.user_rows.push_back(it == dataset.user_rows.end() ? -1 : it->second);
    const auto f = dataset.features.of(id);
    for (std::size_t i = 0; i < du; ++i) ctx.user_features(u, i) = static_cast<T>(f[i]);
  }
  return ctx;
}

template <typename T>
GraphContext<T> make_eval_context(const Dataset& dataset, const TrainConfig& cfg,
                                  std::span<const data::Cascade> extra) {
  std::vector<data::Cascade> all = dataset.cascades(dataset.split.train);
  all.insert(all.end(), extra.begin(), extra.end());
  return make_context<T>(dataset, cfg, std::move(all));
}

template struct GraphContext<float>;
template struct GraphContext<double>;
template GraphContext<float> make_context<float>(const Dataset&, const TrainConfig&, std::vector<data::Cascade>);
template GraphContext<double> make_context<double>(const Dataset&, const TrainConfig&, std::vector<data::Cascade>);
template GraphContext<float> make_eval_context<float>(const Dataset&, const TrainConfig&,
                                                      std::span<const data::Cascade>);
template GraphContext<double> make_eval_context<double>(const Dataset&, const TrainConfig&,
                                                        std::span<const data::Cascade>);

}  // namespace glan
