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

#include "glan/model/run.hpp"

#include <fstream>
#include <memory>
#include <stdexcept>
#include <sstream>

#include "json.hpp"
#include <openssl/evp.h>

#include "glan/numerics/checkpoint.hpp"

namespace glan {

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || !EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) ||
      !EVP_DigestUpdate(ctx.get(), header.data(), header.size()) ||
      !EVP_DigestUpdate(ctx.get(), content.data(), content.size()) || !EVP_DigestFinal_ex(ctx.get(), digest, &len)) {
    throw std::runtime_error("git_blob_sha1: digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    const unsigned char b = digest[i];
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::string git_blob_sha1_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return git_blob_sha1(buf.str());
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = config.seed;
  j["precision"] = config.precision == Precision::k64 ? 64 : 32;
  j["config"] = config.to_text();
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : inputs) j["inputs"].push_back({{"path", in.path}, {"sha1", in.sha1}});
  j["out_dir"] = out_dir;
  return j.dump(2) + "\n";
}

RunManifest make_manifest(std::string command, const TrainConfig& config,
                          const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir) {
  RunManifest m;
  m.command = std::move(command);
  m.config = config;
  m.out_dir = out_dir.string();
  for (const auto& p : inputs) m.inputs.push_back({p.string(), git_blob_sha1_file(p)});
  return m;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / kManifestFile, std::ios::binary);
  out << manifest.to_json();
  if (!out) throw FormatError("cannot write " + (dir / kManifestFile).string());
}

template <typename T>
void save_run(const std::filesystem::path& dir, const GlanModel<T>& model, const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / kConfigFile, std::ios::binary);
    out << model.config().to_text();
    if (!out) throw FormatError("cannot write " + (dir / kConfigFile).string());
  }
  dataset.vocab.save(dir / kVocabFile);
  checkpoint::save(dir / kCheckpointFile, model.params());
}

TrainConfig load_run_config(const std::filesystem::path& dir) { return TrainConfig::load((dir / kConfigFile).string()); }

template <typename T>
GlanModel<T> load_model(const std::filesystem::path& dir, const Dataset& dataset) {
  const data::Vocabulary saved = data::Vocabulary::load(dir / kVocabFile);
  if (!(saved == dataset.vocab)) {
    throw FormatError("vocabulary in " + dir.string() + " (" + std::to_string(saved.size()) +
                      " tokens) does not match the one rebuilt from the corpus (" +
                      std::to_string(dataset.vocab.size()) + " tokens)");
  }
  const TrainConfig cfg = load_run_config(dir);
  GlanModel<T> model = GlanModel<T>::for_dataset(dataset, cfg);
  const ParamStore<T> stored = checkpoint::load<T>(dir / kCheckpointFile);
  if (const auto* emb = stored.find("text.embedding"); emb && emb->value.rows() != dataset.vocab.size()) {
    throw FormatError("checkpoint embedding has " + std::to_string(emb->value.rows()) + " rows for a vocabulary of " +
                      std::to_string(dataset.vocab.size()));
  }
  model.load_values(stored);
  return model;
}

template void save_run<float>(const std::filesystem::path&, const GlanModel<float>&, const Dataset&);
template void save_run<double>(const std::filesystem::path&, const GlanModel<double>&, const Dataset&);
template GlanModel<float> load_model<float>(const std::filesystem::path&, const Dataset&);
template GlanModel<double> load_model<double>(const std::filesystem::path&, const Dataset&);

}  // namespace glan
