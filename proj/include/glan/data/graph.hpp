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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glan/data/corpus.hpp"

namespace glan::data {

class HeteroGraph;

// Edge (u, m) exists iff u authored m's source or any retweet in m's
// cascade; its weight counts those interactions. When `users` is non-empty
// every author must appear in it.
HeteroGraph build_graph(std::span<const Cascade> cascades, std::span<const UserRecord> users = {});
HeteroGraph build_graph(std::span<const Cascade* const> cascades, std::span<const UserRecord> users = {});

// Bipartite user <-> source-tweet participation graph. Tweet node j is the
// j-th cascade passed to build_graph. Users are numbered in order of first
// appearance (source author first, then retweeters by time).
class HeteroGraph {
 public:
  std::size_t num_tweets() const { return tweet_ids_.size(); }
  std::size_t num_users() const { return user_ids_.size(); }
  std::size_t num_edges() const { return tweet_users_.size(); }

  const std::vector<std::string>& tweet_ids() const { return tweet_ids_; }
  const std::vector<std::string>& user_ids() const { return user_ids_; }
  int user_index(std::string_view id) const;  // -1 when absent

  // Neighbors sorted by index, with interaction counts aligned.
  std::span<const int> users_of(int tweet) const;
  std::span<const int> user_weights_of(int tweet) const;
  std::span<const int> tweets_of(int user) const;
  std::span<const int> tweet_weights_of(int user) const;

  friend HeteroGraph build_graph(std::span<const Cascade> cascades, std::span<const UserRecord> users);
  friend HeteroGraph build_graph(std::span<const Cascade* const> cascades, std::span<const UserRecord> users);

 private:
  template <typename Range, typename Get>
  static HeteroGraph build(const Range& cascades, std::span<const UserRecord> users, Get get);

  std::vector<std::string> tweet_ids_;
  std::vector<std::string> user_ids_;
  std::unordered_map<std::string, int> user_lookup_;
  std::vector<int> tweet_offsets_{0}, tweet_users_, tweet_user_w_;
  std::vector<int> user_offsets_{0}, user_tweets_, user_tweet_w_;
};

// "user_id tweet_id weight" per line.
void write_edge_list(std::ostream& out, const HeteroGraph& graph);

}  // namespace glan::data
