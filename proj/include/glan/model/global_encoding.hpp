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

#include <span>
#include <vector>

#include "glan/data/graph.hpp"
#include "glan/numerics/init.hpp"
#include "glan/numerics/ops.hpp"

namespace glan {

template <typename T>
struct GlobalLayer {
  Parameter<T>* a = nullptr;   // K x 2d, row k scores [tweet; user] for head k
  Parameter<T>* c = nullptr;   // K x 2d, row k scores [user; tweet] for head k
  Parameter<T>* wu = nullptr;  // d x d, column block k is W_u^k
  Parameter<T>* wm = nullptr;  // d x d, column block k is W_m^k
};

template <typename T>
struct GlobalParams {
  Parameter<T>* m0 = nullptr;  // free vectors of training tweets, rows x d
  Parameter<T>* u0 = nullptr;  // free vectors of training users, rows x d_u
  Parameter<T>* wm = nullptr;  // d x d
  Parameter<T>* wu = nullptr;  // d_u x d
  std::vector<GlobalLayer<T>> layers;
  std::size_t heads = 1;

  std::size_t dim() const { return wm->value.rows(); }
  std::size_t user_dim() const { return wu->value.rows(); }

  static GlobalParams create(ParamStore<T>& store, std::size_t free_tweets, std::size_t free_users, std::size_t d,
                             std::size_t d_u, std::size_t heads, std::size_t layers, double init_range, Rng& rng);
};

// Neighbor lists of a set of centers in CSR form. Entries of `index` are
// rows of the neighbor matrix the lists refer to.
struct Adjacency {
  std::vector<int> offsets{0};
  std::vector<int> index;

  std::size_t centers() const { return offsets.size() - 1; }
  std::size_t edges() const { return index.size(); }
  // Center row of every edge.
  std::vector<int> edge_centers() const;
};

// The nodes each round touches. Round l (1-based) computes tweets[l] from
// users[l-1] and users[l] from tweets[l-1]; round 0 holds the composed and
// projected inputs. Only nodes that can reach the requested outputs are
// kept, which leaves the outputs unchanged.
struct GlobalPlan {
  std::vector<std::vector<int>> tweets;  // graph tweet ids per round, size T+1
  std::vector<std::vector<int>> users;   // graph user ids per round, size T+1
  std::vector<Adjacency> tweet_adj;      // round l-1: tweets[l] -> rows of users[l-1]
  std::vector<Adjacency> user_adj;       // round l-1: users[l] -> rows of tweets[l-1]
  std::vector<std::vector<int>> tweet_self;  // round l-1: row of each tweets[l] node in tweets[l-1]
  std::vector<std::vector<int>> user_self;   // round l-1: row of each users[l] node in users[l-1]

  std::size_t rounds() const { return tweet_adj.size(); }
};

// Neighbors above the cap are dropped, keeping the most active ones (highest
// interaction count, then lowest index).
std::vector<int> capped_users(const data::HeteroGraph& graph, int tweet, std::size_t cap);
std::vector<int> capped_tweets(const data::HeteroGraph& graph, int user, std::size_t cap);

GlobalPlan plan_global(const data::HeteroGraph& graph, std::span<const int> target_tweets,
                       std::span<const int> target_users, std::size_t layers, std::size_t cap = 256);

// m' = m0[rows] + content, where rows[i] < 0 selects a zero free vector.
template <typename T>
Var compose_nodes(Tape<T>& tape, Var free, std::span<const int> rows, Var content);

template <typename T>
Var project(Tape<T>& tape, Var x, Var w);

// Per-edge attention weights (E x K): softmax over each center's neighbors
// of LeakyReLU(score_k . [center; neighbor]).
template <typename T>
Var relation_attention(Tape<T>& tape, Var centers, Var neighbors, const Adjacency& adj, Var score);

// ELU of the concatenated heads sum_e weight[e,k] * (neighbor_e W^k).
template <typename T>
Var aggregate(Tape<T>& tape, Var weights, Var neighbors, const Adjacency& adj, Var w);

struct GlobalOutput {
  Var tweets;  // rows follow the target tweets; invalid when none requested
  Var users;   // rows follow the target users; invalid when none requested
};

// Runs plan.rounds() synchronous rounds. tweets0/users0 are the projected
// round-0 representations of plan.tweets[0] and plan.users[0] (invalid when
// those sets are empty).
template <typename T>
GlobalOutput encode_global(Tape<T>& tape, const GlobalPlan& plan, const GlobalParams<T>& params, Var tweets0,
                           Var users0);

}  // namespace glan
