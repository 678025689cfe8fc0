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

#include "glan/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "glan/errors.hpp"

namespace glan::data {

namespace {

std::string token_name(int i) { return "w" + std::to_string(i); }

// Shared words take the first half of the vocabulary; the second half is
// divided evenly among classes.
struct TokenLayout {
  int shared;
  int per_class;

  explicit TokenLayout(const SyntheticConfig& cfg)
      : shared(cfg.vocab_size / 2), per_class((cfg.vocab_size - cfg.vocab_size / 2) / cfg.num_classes) {}

  int class_token(int label, int k) const { return shared + label * per_class + k; }
};

}  // namespace

int synthetic_token_class(const SyntheticConfig& cfg, std::string_view token) {
  if (!cfg.text_signal || token.size() < 2 || token[0] != 'w') return -1;
  const int i = std::stoi(std::string(token.substr(1)));
  const TokenLayout layout(cfg);
  if (i < layout.shared) return -1;
  const int c = (i - layout.shared) / layout.per_class;
  return c < cfg.num_classes ? c : -1;
}

Corpus generate_synthetic(const SyntheticConfig& cfg) {
  if (!cfg.structure_signal && !cfg.text_signal) {
    throw ConfigError("synthetic corpus needs at least one of structure_signal, text_signal");
  }
  if (cfg.n_cascades < 8) throw ConfigError("synthetic corpus needs n_cascades >= 8");
  if (cfg.n_users < 4 || cfg.n_users < cfg.num_classes) throw ConfigError("synthetic corpus needs n_users >= 4");
  if (cfg.num_classes != 2 && cfg.num_classes != 4) throw ConfigError("num_classes must be 2 or 4");
  if (cfg.vocab_size < 4 * cfg.num_classes) throw ConfigError("vocab_size too small for the class count");
  if (cfg.min_retweets < 0 || cfg.max_retweets < cfg.min_retweets) throw ConfigError("bad retweet range");
  if (cfg.text_length < 1) throw ConfigError("text_length must be positive");

  std::mt19937_64 rng(cfg.seed);
  const TokenLayout layout(cfg);
  Corpus corpus;
  corpus.num_classes = cfg.num_classes;

  for (int u = 0; u < cfg.n_users; ++u) {
    UserRecord rec{"u" + std::to_string(u), std::nullopt};
    if (cfg.user_features) {
      std::lognormal_distribution<double> counts(5.0, 1.5);
      rec.features = std::vector<double>{std::round(counts(rng)), std::round(counts(rng)), std::round(counts(rng))};
    }
    corpus.users.push_back(std::move(rec));
  }

  std::vector<int> labels(static_cast<std::size_t>(cfg.n_cascades));
  for (int i = 0; i < cfg.n_cascades; ++i) labels[static_cast<std::size_t>(i)] = i % cfg.num_classes;
  std::shuffle(labels.begin(), labels.end(), rng);

  // Pool c holds users u with u % num_classes == c.
  auto pick_user = [&](int label) {
    if (!cfg.structure_signal) {
      return std::uniform_int_distribution<int>(0, cfg.n_users - 1)(rng);
    }
    const int pool_size = (cfg.n_users - label + cfg.num_classes - 1) / cfg.num_classes;
    const int k = std::uniform_int_distribution<int>(0, pool_size - 1)(rng);
    return k * cfg.num_classes + label;
  };
  auto make_text = [&](int label) {
    std::vector<std::string> tokens;
    if (!cfg.text_signal) {
      std::uniform_int_distribution<int> any(0, cfg.vocab_size - 1);
      for (int k = 0; k < cfg.text_length; ++k) tokens.push_back(token_name(any(rng)));
      return tokens;
    }
    std::uniform_int_distribution<int> shared(0, layout.shared - 1);
    std::uniform_int_distribution<int> own(0, layout.per_class - 1);
    std::bernoulli_distribution use_own(0.5);
    tokens.push_back(token_name(layout.class_token(label, own(rng))));
    for (int k = 1; k < cfg.text_length; ++k) {
      tokens.push_back(token_name(use_own(rng) ? layout.class_token(label, own(rng)) : shared(rng)));
    }
    std::shuffle(tokens.begin(), tokens.end(), rng);
    return tokens;
  };

  std::uniform_int_distribution<int> n_retweets(cfg.min_retweets, cfg.max_retweets);
  std::uniform_real_distribution<double> jitter(0.0, 3600.0);
  std::exponential_distribution<double> delay(1.0 / cfg.mean_retweet_delay);
  constexpr double kEpoch = 1.6e9;

  for (int i = 0; i < cfg.n_cascades; ++i) {
    const int label = labels[static_cast<std::size_t>(i)];
    Cascade c;
    c.label = label;
    c.source.id = "s" + std::to_string(i);
    c.source.author = corpus.users[static_cast<std::size_t>(pick_user(label))].id;
    c.source.tokens = make_text(label);
    c.source.timestamp = std::round(kEpoch + 86400.0 * i + jitter(rng));
    const int n = n_retweets(rng);
    for (int k = 0; k < n; ++k) {
      Microblog r;
      r.id = c.source.id + "_r" + std::to_string(k);
      r.author = corpus.users[static_cast<std::size_t>(pick_user(label))].id;
      r.tokens = make_text(label);
      r.timestamp = c.source.timestamp + std::round(delay(rng));
      r.parent = c.source.id;
      c.retweets.push_back(std::move(r));
    }
    std::stable_sort(c.retweets.begin(), c.retweets.end(),
                     [](const Microblog& a, const Microblog& b) { return a.timestamp < b.timestamp; });
    corpus.cascades.push_back(std::move(c));
  }
  return corpus;
}

}  // namespace glan::data
