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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace glan::data {

// Class labels. Binary corpora use {NR, FR}; four-class corpora use all four.
enum class Label : int { kNR = 0, kFR = 1, kUR = 2, kTR = 3 };

std::string_view label_name(int label);
std::optional<int> parse_label(std::string_view name);

struct Microblog {
  std::string id;
  std::string author;
  std::vector<std::string> tokens;
  double timestamp = 0;               // seconds since epoch
  std::optional<std::string> parent;  // source id; absent for source tweets
};

struct Cascade {
  Microblog source;
  std::vector<Microblog> retweets;  // ascending by timestamp
  int label = 0;
};

struct UserRecord {
  std::string id;
  std::optional<std::vector<double>> features;
};

struct Corpus {
  std::vector<Cascade> cascades;
  std::vector<UserRecord> users;
  int num_classes = 2;  // 2 when only NR/FR occur, else 4

  const UserRecord* find_user(std::string_view id) const;
};

// Parses the JSON-lines corpus format. Each line is either
//   {"type":"tweet","id":..,"author":..,"text":..,"ts":..,"parent"?:..,"label"?:..}
//   {"type":"user","id":..,"features"?:[..]}
// Blank lines are skipped. Errors name the 1-based line number.
Corpus parse_corpus(std::istream& in);
Corpus ingest(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

struct CorpusStats {
  std::size_t source_tweets = 0;
  std::size_t posts = 0;  // sources plus retweets
  std::size_t users = 0;
  std::vector<std::size_t> per_class;  // indexed by label id, length 4
};

CorpusStats corpus_stats(const Corpus& corpus);

std::vector<std::string> tokenize(std::string_view text);

// Keeps retweets posted at most `delay` seconds after the source. The
// source is always kept. delay may be +infinity; negative throws.
Cascade time_filter(const Cascade& cascade, double delay);

}  // namespace glan::data
