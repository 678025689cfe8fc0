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

#include "glan/model/global_encoding.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>

namespace glan {

template <typename T>
GlobalParams<T> GlobalParams<T>::create(ParamStore<T>& store, std::size_t free_tweets, std::size_t free_users,
                                        std::size_t d, std::size_t d_u, std::size_t heads, std::size_t layers,
                                        double init_range, Rng& rng) {
  if (heads == 0 || d % heads != 0) {
    throw ConfigError("graph attention: d=" + std::to_string(d) + " not divisible by K=" + std::to_string(heads));
  }
  if (layers == 0) throw ConfigError("graph attention needs at least one layer");
  GlobalParams p;
  p.heads = heads;
  p.m0 = &store.add("global.m0", uniform_tensor<T>({std::max<std::size_t>(free_tweets, 1), d}, init_range, rng));
  p.u0 = &store.add("global.u0", uniform_tensor<T>({std::max<std::size_t>(free_users, 1), d_u}, init_range, rng));
  p.wm = &store.add("global.wm", uniform_tensor<T>({d, d}, init_range, rng));
  p.wu = &store.add("global.wu", uniform_tensor<T>({d_u, d}, init_range, rng));
  for (std::size_t l = 0; l < layers; ++l) {
    const std::string prefix = "global.layer" + std::to_string(l);
    GlobalLayer<T> layer;
    layer.a = &store.add(prefix + ".a", uniform_tensor<T>({heads, 2 * d}, init_range, rng));
    layer.c = &store.add(prefix + ".c", uniform_tensor<T>({heads, 2 * d}, init_range, rng));
    layer.wu = &store.add(prefix + ".wu", uniform_tensor<T>({d, d}, init_range, rng));
    layer.wm = &store.add(prefix + ".wm", uniform_tensor<T>({d, d}, init_range, rng));
    p.layers.push_back(layer);
  }
  return p;
}

std::vector<int> Adjacency::edge_centers() const {
  std::vector<int> out(edges());
  for (std::size_t s = 0; s < centers(); ++s) std::fill(out.begin() + offsets[s], out.begin() + offsets[s + 1], int(s));
  return out;
}

namespace {

std::vector<int> cap_neighbors(std::span<const int> nbrs, std::span<const int> weights, std::size_t cap) {
  std::vector<int> out(nbrs.begin(), nbrs.end());
  if (out.size() <= cap) return out;
  std::vector<std::size_t> order(nbrs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return weights[x] != weights[y] ? weights[x] > weights[y] : nbrs[x] < nbrs[y];
  });
  out.clear();
  for (std::size_t i = 0; i < cap; ++i) out.push_back(nbrs[order[i]]);
  std::sort(out.begin(), out.end());
  return out;
}

template <typename Nbrs>
Adjacency link(std::span<const int> centers, const std::vector<int>& targets, Nbrs nbrs) {
  std::unordered_map<int, int> row;
  for (std::size_t i = 0; i < targets.size(); ++i) row.emplace(targets[i], int(i));
  Adjacency adj;
  for (int c : centers) {
    for (int n : nbrs(c)) adj.index.push_back(row.at(n));
    adj.offsets.push_back(int(adj.index.size()));
  }
  return adj;
}

std::vector<int> rows_of(std::span<const int> ids, const std::vector<int>& sorted) {
  std::vector<int> rows;
  rows.reserve(ids.size());
  for (int id : ids) rows.push_back(int(std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin()));
  return rows;
}

}  // namespace

std::vector<int> capped_users(const data::HeteroGraph& graph, int tweet, std::size_t cap) {
  return cap_neighbors(graph.users_of(tweet), graph.user_weights_of(tweet), cap);
}

std::vector<int> capped_tweets(const data::HeteroGraph& graph, int user, std::size_t cap) {
  return cap_neighbors(graph.tweets_of(user), graph.tweet_weights_of(user), cap);
}

GlobalPlan plan_global(const data::HeteroGraph& graph, std::span<const int> target_tweets,
                       std::span<const int> target_users, std::size_t layers, std::size_t cap) {
  if (layers == 0) throw ConfigError("graph attention needs at least one layer");
  if (cap == 0) throw ConfigError("neighbor cap must be positive");
  for (int t : target_tweets) {
    if (t < 0 || t >= int(graph.num_tweets())) throw DomainError("plan_global: tweet node out of range");
  }
  for (int u : target_users) {
    if (u < 0 || u >= int(graph.num_users())) throw DomainError("plan_global: user node out of range");
  }
  auto user_nbrs = [&](int t) { return capped_users(graph, t, cap); };
  auto tweet_nbrs = [&](int u) { return capped_tweets(graph, u, cap); };

  GlobalPlan plan;
  plan.tweets.resize(layers + 1);
  plan.users.resize(layers + 1);
  plan.tweet_adj.resize(layers);
  plan.user_adj.resize(layers);
  plan.tweet_self.resize(layers);
  plan.user_self.resize(layers);
  plan.tweets[layers].assign(target_tweets.begin(), target_tweets.end());
  plan.users[layers].assign(target_users.begin(), target_users.end());
  for (std::size_t l = layers; l > 0; --l) {
    // Centers keep their own previous representation for the attention score.
    std::set<int> us(plan.users[l].begin(), plan.users[l].end());
    std::set<int> tw(plan.tweets[l].begin(), plan.tweets[l].end());
    for (int t : plan.tweets[l])
      for (int u : user_nbrs(t)) us.insert(u);
    for (int u : plan.users[l])
      for (int t : tweet_nbrs(u)) tw.insert(t);
    plan.users[l - 1].assign(us.begin(), us.end());
    plan.tweets[l - 1].assign(tw.begin(), tw.end());
    plan.tweet_adj[l - 1] = link(plan.tweets[l], plan.users[l - 1], user_nbrs);
    plan.user_adj[l - 1] = link(plan.users[l], plan.tweets[l - 1], tweet_nbrs);
    plan.tweet_self[l - 1] = rows_of(plan.tweets[l], plan.tweets[l - 1]);
    plan.user_self[l - 1] = rows_of(plan.users[l], plan.users[l - 1]);
  }
  return plan;
}

template <typename T>
Var compose_nodes(Tape<T>& tape, Var free, std::span<const int> rows, Var content) {
  if (tape.value(content).rows() != rows.size()) throw DomainError("compose_nodes: one row index per node required");
  if (tape.value(free).cols() != tape.value(content).cols()) throw DomainError("compose_nodes: width mismatch");
  return ops::add(tape, ops::gather_rows(tape, free, rows), content);
}

template <typename T>
Var project(Tape<T>& tape, Var x, Var w) {
  if (tape.value(x).cols() != tape.value(w).rows()) {
    throw DomainError("project: " + shape_string(tape.value(x).shape()) + " by " +
                      shape_string(tape.value(w).shape()));
  }
  return ops::matmul(tape, x, w);
}

template <typename T>
Var relation_attention(Tape<T>& tape, Var centers, Var neighbors, const Adjacency& adj, Var score) {
  const std::size_t d = tape.value(centers).cols();
  if (tape.value(neighbors).cols() != d || tape.value(score).cols() != 2 * d) {
    throw DomainError("relation_attention: score vectors must have 2d entries");
  }
  if (adj.centers() != tape.value(centers).rows()) throw DomainError("relation_attention: adjacency/center mismatch");
  for (std::size_t s = 0; s < adj.centers(); ++s) {
    if (adj.offsets[s + 1] <= adj.offsets[s]) throw DomainError("relation_attention: center without neighbors");
  }
  // score_k . [x; y] = score_k[:d] . x + score_k[d:] . y
  const Var center_part = ops::matmul_nt(tape, centers, ops::slice_cols(tape, score, 0, d));
  const Var neighbor_part = ops::matmul_nt(tape, neighbors, ops::slice_cols(tape, score, d, d));
  const std::vector<int> owner = adj.edge_centers();
  const Var logits = ops::add(tape, ops::gather_rows(tape, center_part, owner),
                              ops::gather_rows(tape, neighbor_part, adj.index));
  return ops::segment_softmax(tape, ops::leaky_relu(tape, logits), adj.offsets);
}

template <typename T>
Var aggregate(Tape<T>& tape, Var weights, Var neighbors, const Adjacency& adj, Var w) {
  const Var transformed = ops::matmul(tape, neighbors, w);
  const Var per_edge = ops::gather_rows(tape, transformed, adj.index);
  return ops::elu(tape, ops::segment_weighted_sum(tape, weights, per_edge, adj.offsets));
}

template <typename T>
GlobalOutput encode_global(Tape<T>& tape, const GlobalPlan& plan, const GlobalParams<T>& params, Var tweets0,
                           Var users0) {
  if (plan.rounds() != params.layers.size()) throw ConfigError("encode_global: plan depth differs from layer count");
  Var tweets = tweets0, users = users0;
  for (std::size_t l = 0; l < plan.rounds(); ++l) {
    const GlobalLayer<T>& layer = params.layers[l];
    Var next_tweets, next_users;
    if (!plan.tweets[l + 1].empty()) {
      const Adjacency& adj = plan.tweet_adj[l];
      const Var centers = ops::gather_rows(tape, tweets, plan.tweet_self[l]);
      const Var w = relation_attention(tape, centers, users, adj, tape.param(*layer.a));
      next_tweets = aggregate(tape, w, users, adj, tape.param(*layer.wu));
    }
    if (!plan.users[l + 1].empty()) {
      const Adjacency& adj = plan.user_adj[l];
      const Var centers = ops::gather_rows(tape, users, plan.user_self[l]);
      const Var w = relation_attention(tape, centers, tweets, adj, tape.param(*layer.c));
      next_users = aggregate(tape, w, tweets, adj, tape.param(*layer.wm));
    }
    tweets = next_tweets;
    users = next_users;
  }
  return {tweets, users};
}

#define GLAN_INSTANTIATE(T)                                                                               \
  template struct GlobalParams<T>;                                                                        \
  template Var compose_nodes<T>(Tape<T>&, Var, std::span<const int>, Var);                                \
  template Var project<T>(Tape<T>&, Var, Var);                                                            \
  template Var relation_attention<T>(Tape<T>&, Var, Var, const Adjacency&, Var);                          \
  template Var aggregate<T>(Tape<T>&, Var, Var, const Adjacency&, Var);                                   \
  template GlobalOutput encode_global<T>(Tape<T>&, const GlobalPlan&, const GlobalParams<T>&, Var, Var);

GLAN_INSTANTIATE(float)
GLAN_INSTANTIATE(double)

}  // namespace glan
