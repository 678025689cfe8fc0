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

#include "glan/data/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "glan/errors.hpp"

namespace glan::data {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{"<pad>", "<unk>"}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 2) throw DomainError("vocabulary needs the pad and unk entries");
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw FormatError("duplicate vocabulary token: " + tokens_[i]);
    }
  }
}

int Vocabulary::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() || it->second < 2 ? kUnk : it->second;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open vocabulary " + path.string());
  std::vector<std::string> tokens;
  for (std::string line; std::getline(in, line);) tokens.push_back(line);
  return Vocabulary(std::move(tokens));
}

namespace {

template <typename Range, typename Get>
Vocabulary build_from(const Range& cascades, int min_count, Get get) {
  if (cascades.empty()) throw DomainError("build_vocab: empty training set");
  std::map<std::string, int> counts;
  for (const auto& item : cascades) {
    const Cascade& c = get(item);
    for (const auto& t : c.source.tokens) ++counts[t];
    for (const auto& r : c.retweets)
      for (const auto& t : r.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, int>> kept;
  for (auto& [tok, n] : counts) {
    if (n >= min_count && tok != "<pad>" && tok != "<unk>") kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{"<pad>", "<unk>"};
  for (auto& [tok, n] : kept) tokens.push_back(tok);
  return Vocabulary(std::move(tokens));
}

}  // namespace

Vocabulary build_vocab(std::span<const Cascade> train, int min_count) {
  return build_from(train, min_count, [](const Cascade& c) -> const Cascade& { return c; });
}

Vocabulary build_vocab(std::span<const Cascade* const> train, int min_count) {
  return build_from(train, min_count, [](const Cascade* c) -> const Cascade& { return *c; });
}

std::vector<int> fit_length(std::span<const int> ids, int length) {
  if (length < 1) throw DomainError("fit_length: length must be at least 1");
  const auto len = static_cast<std::size_t>(length);
  std::vector<int> out(len, Vocabulary::kPad);
  if (ids.size() >= len) {
    std::copy_n(ids.begin(), len, out.begin());
  } else {
    std::copy(ids.begin(), ids.end(), out.begin() + static_cast<std::ptrdiff_t>(len - ids.size()));
  }
  return out;
}

std::vector<int> encode_text(std::span<const std::string> tokens, const Vocabulary& vocab, int length) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id(t));
  return fit_length(ids, length);
}

}  // namespace glan::data
