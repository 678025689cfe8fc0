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

#include <cstdint>

#include "glan/data/corpus.hpp"

namespace glan::data {

// Desk-scale stand-in for crawled corpora. With structure_signal, cascades
// of each class are authored and retweeted only by that class's pool of
// users, so labels are recoverable from the graph alone. With text_signal,
// every text mixes shared words with words private to its class. A channel
// whose signal is off is sampled independently of the label.
struct SyntheticConfig {
  int n_cascades = 64;
  int n_users = 64;
  int vocab_size = 120;
  bool structure_signal = true;
  bool text_signal = false;
  std::uint64_t seed = 7;
  int num_classes = 2;
  int min_retweets = 2;
  int max_retweets = 8;
  int text_length = 10;
  double mean_retweet_delay = 5400;  // seconds; offsets are exponential
  bool user_features = false;
};

Corpus generate_synthetic(const SyntheticConfig& cfg);

// Token naming used by the generator, exposed for oracles: returns the
// class a token is private to, or -1 for shared tokens.
int synthetic_token_class(const SyntheticConfig& cfg, std::string_view token);

}  // namespace glan::data
