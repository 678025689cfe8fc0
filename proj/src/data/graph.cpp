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

#include "glan/data/graph.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_set>

#include "glan/errors.hpp"

namespace glan::data {

int HeteroGraph::user_index(std::string_view id) const {
  auto it = user_lookup_.find(std::string(id));
  return it == user_lookup_.end() ? -1 : it->second;
}

std::span<const int> HeteroGraph::users_of(int tweet) const {
  const auto t = static_cast<std::size_t>(tweet);
  return std::span<const int>(tweet_users_).subspan(tweet_offsets_[t], tweet_offsets_[t + 1] - tweet_offsets_[t]);
}

std::span<const int> HeteroGraph::user_weights_of(int tweet) const {
  const auto t = static_cast<std::size_t>(tweet);
  return std::span<const int>(tweet_user_w_).subspan(tweet_offsets_[t], tweet_offsets_[t + 1] - tweet_offsets_[t]);
}

std::span<const int> HeteroGraph::tweets_of(int user) const {
  const auto u = static_cast<std::size_t>(user);
  return std::span<const int>(user_tweets_).subspan(user_offsets_[u], user_offsets_[u + 1] - user_offsets_[u]);
}

std::span<const int> HeteroGraph::tweet_weights_of(int user) const {
  const auto u = static_cast<std::size_t>(user);
  return std::span<const int>(user_tweet_w_).subspan(user_offsets_[u], user_offsets_[u + 1] - user_offsets_[u]);
}

template <typename Range, typename Get>
HeteroGraph HeteroGraph::build(const Range& cascades, std::span<const UserRecord> users, Get get) {
  std::unordered_set<std::string> known;
  for (const auto& u : users) known.insert(u.id);

  HeteroGraph g;
  std::vector<std::map<int, int>> per_tweet;
  per_tweet.reserve(cascades.size());
  auto intern = [&](const std::string& author) {
    if (!users.empty() && !known.contains(author)) throw DomainError("build_graph: unknown author " + author);
    auto [it, inserted] = g.user_lookup_.emplace(author, static_cast<int>(g.user_ids_.size()));
    if (inserted) g.user_ids_.push_back(author);
    return it->second;
  };
  for (const auto& item : cascades) {
    const Cascade& c = get(item);
    g.tweet_ids_.push_back(c.source.id);
    auto& counts = per_tweet.emplace_back();
    ++counts[intern(c.source.author)];
    for (const auto& r : c.retweets) ++counts[intern(r.author)];
  }

  std::vector<std::vector<std::pair<int, int>>> per_user(g.user_ids_.size());
  for (std::size_t t = 0; t < per_tweet.size(); ++t) {
    for (auto [u, w] : per_tweet[t]) {
      g.tweet_users_.push_back(u);
      g.tweet_user_w_.push_back(w);
      per_user[static_cast<std::size_t>(u)].emplace_back(static_cast<int>(t), w);
    }
    g.tweet_offsets_.push_back(static_cast<int>(g.tweet_users_.size()));
  }
  for (const auto& list : per_user) {
    for (auto [t, w] : list) {
      g.user_tweets_.push_back(t);
      g.user_tweet_w_.push_back(w);
    }
    g.user_offsets_.push_back(static_cast<int>(g.user_tweets_.size()));
  }
  return g;
}

HeteroGraph build_graph(std::span<const Cascade> cascades, std::span<const UserRecord> users) {
  return HeteroGraph::build(cascades, users, [](const Cascade& c) -> const Cascade& { return c; });
}

HeteroGraph build_graph(std::span<const Cascade* const> cascades, std::span<const UserRecord> users) {
  return HeteroGraph::build(cascades, users, [](const Cascade* c) -> const Cascade& { return *c; });
}

void write_edge_list(std::ostream& out, const HeteroGraph& graph) {
  for (std::size_t t = 0; t < graph.num_tweets(); ++t) {
    auto users = graph.users_of(static_cast<int>(t));
    auto weights = graph.user_weights_of(static_cast<int>(t));
    for (std::size_t e = 0; e < users.size(); ++e) {
      out << graph.user_ids()[static_cast<std::size_t>(users[e])] << ' ' << graph.tweet_ids()[t] << ' '
          << weights[e] << '\n';
    }
  }
}

}  // namespace glan::data
