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
#include <string>
#include <unordered_map>
#include <vector>

#include "glan/data/graph.hpp"
#include "glan/data/split.hpp"
#include "glan/data/vocab.hpp"
#include "glan/model/config.hpp"
#include "glan/numerics/tensor.hpp"

namespace glan {

// Static user vectors u_f. Supplied features become sign(x) log(1 + |x|),
// are standardised with statistics of the training users and zero-padded to
// d_u. Users without features get a standard-normal vector seeded by the
// run seed and the user id, so the same user always gets the same vector.
class UserFeatures {
 public:
  UserFeatures() = default;
  UserFeatures(const data::Corpus& corpus, std::span<const std::string> train_users, std::size_t dim,
               std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::vector<double> of(const std::string& user) const;

 private:
  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  std::unordered_map<std::string, std::vector<double>> supplied_;  // transformed, unnormalised
  std::vector<double> mean_, scale_;
};

struct EncodedCascade {
  std::vector<int> source;    // length L
  std::vector<int> retweets;  // n * L, latest retweets only
  std::size_t n_retweets = 0;
  int label = 0;
};

EncodedCascade encode_cascade(const data::Cascade& cascade, const data::Vocabulary& vocab, int length,
                              std::size_t max_retweets);

// Everything derived from the corpus before any parameter exists: the split,
// the training vocabulary and the rows of the free node vectors. Training
// tweets and the users of the training graph own free vectors; every other
// node reads a zero row.
struct Dataset {
  data::Corpus corpus;
  data::Split split;
  data::Vocabulary vocab;
  std::unordered_map<std::string, int> tweet_rows;
  std::unordered_map<std::string, int> user_rows;
  UserFeatures features;
  int num_classes = 2;

  std::vector<data::Cascade> cascades(std::span<const std::size_t> indices) const;
  std::size_t free_tweets() const { return tweet_rows.size(); }
  std::size_t free_users() const { return user_rows.size(); }
};

Dataset prepare_dataset(data::Corpus corpus, const TrainConfig& cfg);

// A graph over a concrete set of cascades plus everything the model reads
// per node. Tweet node j is cascades[j].
template <typename T>
struct GraphContext {
  std::vector<data::Cascade> cascades;
  data::HeteroGraph graph;
  std::vector<EncodedCascade> encoded;
  std::vector<int> tweet_rows;  // free-vector row per tweet node, -1 if none
  std::vector<int> user_rows;   // free-vector row per user node, -1 if none
  Tensor<T> user_features;      // num_users x d_u

  std::vector<int> labels() const;
};

template <typename T>
GraphContext<T> make_context(const Dataset& dataset, const TrainConfig& cfg, std::vector<data::Cascade> cascades);

// Training cascades followed by `extra` (typically dev or test cascades).
template <typename T>
GraphContext<T> make_eval_context(const Dataset& dataset, const TrainConfig& cfg,
                                  std::span<const data::Cascade> extra);

}  // namespace glan
