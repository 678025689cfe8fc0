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

#include "glan/data/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "glan/errors.hpp"
#include "json.hpp"

namespace glan::data {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 4> kLabelNames = {"NR", "FR", "UR", "TR"};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw FormatError("corpus line " + std::to_string(line) + ": " + what);
}

std::string required_string(const json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) fail(line, std::string("missing string field \"") + key + "\"");
  return it->get<std::string>();
}

}  // namespace

std::string_view label_name(int label) {
  if (label < 0 || label >= static_cast<int>(kLabelNames.size())) throw DomainError("unknown label id");
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::optional<int> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

const UserRecord* Corpus::find_user(std::string_view id) const {
  for (const auto& u : users) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

Corpus parse_corpus(std::istream& in) {
  struct PendingRetweet {
    Microblog blog;
    std::size_t line;
  };
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> source_index;
  std::unordered_map<std::string, std::size_t> user_index;
  std::unordered_set<std::string> tweet_ids;
  std::vector<PendingRetweet> pending;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      fail(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail(line, "record is not an object");
    const std::string type = required_string(j, "type", line);
    if (type == "user") {
      UserRecord user{required_string(j, "id", line), std::nullopt};
      if (auto f = j.find("features"); f != j.end() && !f->is_null()) {
        if (!f->is_array()) fail(line, "features must be an array of numbers");
        std::vector<double> values;
        for (const auto& v : *f) {
          if (!v.is_number()) fail(line, "features must be an array of numbers");
          values.push_back(v.get<double>());
          if (!std::isfinite(values.back())) fail(line, "non-finite feature value");
        }
        user.features = std::move(values);
      }
      if (auto it = user_index.find(user.id); it != user_index.end()) {
        if (corpus.users[it->second].features != user.features) fail(line, "conflicting duplicate user " + user.id);
        continue;
      }
      user_index.emplace(user.id, corpus.users.size());
      corpus.users.push_back(std::move(user));
    } else if (type == "tweet") {
      Microblog blog;
      blog.id = required_string(j, "id", line);
      blog.author = required_string(j, "author", line);
      blog.tokens = tokenize(required_string(j, "text", line));
      auto ts = j.find("ts");
      if (ts == j.end() || !ts->is_number()) fail(line, "missing numeric field \"ts\"");
      blog.timestamp = ts->get<double>();
      if (!std::isfinite(blog.timestamp)) fail(line, "non-finite timestamp");
      if (!tweet_ids.insert(blog.id).second) fail(line, "duplicate tweet id " + blog.id);
      if (auto p = j.find("parent"); p != j.end() && !p->is_null()) {
        if (!p->is_string()) fail(line, "parent must be a string");
        blog.parent = p->get<std::string>();
        pending.push_back({std::move(blog), line});
      } else {
        auto lab = j.find("label");
        if (lab == j.end() || !lab->is_string()) fail(line, "source tweet " + blog.id + " has no label");
        auto label = parse_label(lab->get<std::string>());
        if (!label) fail(line, "unknown label \"" + lab->get<std::string>() + "\"");
        source_index.emplace(blog.id, corpus.cascades.size());
        corpus.cascades.push_back(Cascade{std::move(blog), {}, *label});
      }
    } else {
      fail(line, "unknown record type \"" + type + "\"");
    }
  }

  for (auto& rt : pending) {
    auto it = source_index.find(*rt.blog.parent);
    if (it == source_index.end()) {
      fail(rt.line, "retweet " + rt.blog.id + " references unknown source " + *rt.blog.parent);
    }
    Cascade& c = corpus.cascades[it->second];
    if (rt.blog.timestamp < c.source.timestamp) {
      fail(rt.line, "retweet " + rt.blog.id + " predates its source " + c.source.id);
    }
    c.retweets.push_back(std::move(rt.blog));
  }

  bool four_class = false;
  for (auto& c : corpus.cascades) {
    std::stable_sort(c.retweets.begin(), c.retweets.end(),
                     [](const Microblog& a, const Microblog& b) { return a.timestamp < b.timestamp; });
    four_class = four_class || c.label >= 2;
    // Authors without a user record become feature-less users.
    auto register_author = [&](const std::string& author) {
      if (!user_index.contains(author)) {
        user_index.emplace(author, corpus.users.size());
        corpus.users.push_back(UserRecord{author, std::nullopt});
      }
    };
    register_author(c.source.author);
    for (const auto& r : c.retweets) register_author(r.author);
  }
  corpus.num_classes = four_class ? 4 : 2;
  return corpus;
}

Corpus ingest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  auto join = [](const std::vector<std::string>& tokens) {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) s += ' ';
      s += tokens[i];
    }
    return s;
  };
  for (const auto& u : corpus.users) {
    json j = {{"type", "user"}, {"id", u.id}};
    if (u.features) j["features"] = *u.features;
    out << j.dump() << '\n';
  }
  for (const auto& c : corpus.cascades) {
    json s = {{"type", "tweet"}, {"id", c.source.id}, {"author", c.source.author},
              {"text", join(c.source.tokens)}, {"ts", c.source.timestamp},
              {"label", std::string(label_name(c.label))}};
    out << s.dump() << '\n';
    for (const auto& r : c.retweets) {
      json j = {{"type", "tweet"}, {"id", r.id}, {"author", r.author}, {"text", join(r.tokens)},
                {"ts", r.timestamp}, {"parent", c.source.id}};
      out << j.dump() << '\n';
    }
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_corpus(out, corpus);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.per_class.assign(4, 0);
  stats.source_tweets = corpus.cascades.size();
  stats.users = corpus.users.size();
  for (const auto& c : corpus.cascades) {
    stats.posts += 1 + c.retweets.size();
    ++stats.per_class[static_cast<std::size_t>(c.label)];
  }
  return stats;
}

Cascade time_filter(const Cascade& cascade, double delay) {
  if (std::isnan(delay) || delay < 0) throw DomainError("time_filter: delay must be non-negative");
  Cascade out;
  out.source = cascade.source;
  out.label = cascade.label;
  for (const auto& r : cascade.retweets) {
    if (r.timestamp - cascade.source.timestamp <= delay) out.retweets.push_back(r);
  }
  return out;
}

}  // namespace glan::data
