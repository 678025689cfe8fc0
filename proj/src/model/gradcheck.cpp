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

#include "glan/model/gradcheck.hpp"

#include "glan/data/synthetic.hpp"
#include "glan/model/model.hpp"

namespace glan {

TrainConfig grad_check_config() {
  TrainConfig c;
  c.d = 12;
  c.length = 10;
  c.widths = {3, 4, 5};
  c.filters_per_width = 4;
  c.heads = 2;
  c.global_heads = 2;
  c.layers = 1;
  c.user_dim = 4;
  c.min_count = 1;
  c.precision = Precision::k64;
  c.seed = 11;
  return c;
}

GradCheckReport end_to_end_grad_check(const TrainConfig& cfg, std::uint64_t corpus_seed, double eps) {
  data::SyntheticConfig sc;
  sc.n_cascades = 8;
  sc.n_users = 6;
  sc.vocab_size = 16;
  sc.text_signal = true;
  sc.text_length = 6;
  sc.min_retweets = 1;
  sc.max_retweets = 3;
  sc.seed = corpus_seed;
  data::Corpus full = data::generate_synthetic(sc);

  // Three cascades, all treated as training data so every free vector is live.
  Dataset ds;
  ds.corpus.users = full.users;
  ds.corpus.num_classes = full.num_classes;
  ds.num_classes = full.num_classes;
  ds.corpus.cascades.assign(full.cascades.begin(), full.cascades.begin() + 3);
  ds.split.train = {0, 1, 2};
  ds.vocab = data::build_vocab(std::span<const data::Cascade>(ds.corpus.cascades), cfg.min_count);
  for (int i = 0; i < 3; ++i) ds.tweet_rows.emplace(ds.corpus.cascades[std::size_t(i)].source.id, i);
  const data::HeteroGraph graph = data::build_graph(ds.corpus.cascades, ds.corpus.users);
  for (std::size_t u = 0; u < graph.num_users(); ++u) ds.user_rows.emplace(graph.user_ids()[u], int(u));
  ds.features = UserFeatures(ds.corpus, graph.user_ids(), std::size_t(cfg.user_dim), cfg.seed);

  GlanModel<double> model = GlanModel<double>::for_dataset(ds, cfg);
  const GraphContext<double> ctx = make_context<double>(ds, cfg, ds.corpus.cascades);
  const std::vector<int> targets{0, 1, 2};
  const std::vector<int> gold = ctx.labels();
  auto loss = [&](Tape<double>& tape) {
    return ops::nll_loss(tape, model.forward(tape, ctx, targets).probs, gold, cfg.mean_loss);
  };
  std::vector<Parameter<double>*> params = model.params().all();
  return grad_check(loss, params, eps);
}

}  // namespace glan
