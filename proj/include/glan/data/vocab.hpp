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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glan/data/corpus.hpp"

namespace glan::data {

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> tokens);  // tokens[0], tokens[1] are pad/unk

  int id(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  bool contains(std::string_view token) const { return index_.contains(std::string(token)); }

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Counts tokens over sources and retweets of the given cascades and keeps
// those seen at least min_count times, ordered by frequency (descending)
// then lexicographically.
Vocabulary build_vocab(std::span<const Cascade> train, int min_count = 2);
Vocabulary build_vocab(std::span<const Cascade* const> train, int min_count = 2);

// Left-pads with 0 or truncates from the end to exactly `length` ids.
std::vector<int> fit_length(std::span<const int> ids, int length);

std::vector<int> encode_text(std::span<const std::string> tokens, const Vocabulary& vocab, int length);

}  // namespace glan::data
