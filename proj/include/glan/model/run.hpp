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
#include <string>
#include <string_view>
#include <vector>

#include "glan/model/model.hpp"

namespace glan {

// SHA-1 of "blob <size>\0<content>", i.e. the id git gives the file.
std::string git_blob_sha1(std::string_view content);
std::string git_blob_sha1_file(const std::filesystem::path& path);

struct ManifestInput {
  std::string path;
  std::string sha1;
};

struct RunManifest {
  std::string command;
  TrainConfig config;
  std::vector<ManifestInput> inputs;
  std::string out_dir;

  std::string to_json() const;
};

RunManifest make_manifest(std::string command, const TrainConfig& config,
                          const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir);

// Writes <dir>/manifest.json, creating the directory.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& dir);

// A run directory holds manifest.json, config.txt, vocab.txt,
// checkpoint.bin and log.jsonl.
inline constexpr const char* kConfigFile = "config.txt";
inline constexpr const char* kVocabFile = "vocab.txt";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kLogFile = "log.jsonl";
inline constexpr const char* kManifestFile = "manifest.json";

template <typename T>
void save_run(const std::filesystem::path& dir, const GlanModel<T>& model, const Dataset& dataset);

TrainConfig load_run_config(const std::filesystem::path& dir);

// Rebuilds the model for `dataset` (which must come from the same corpus and
// config) and loads the checkpoint. The saved vocabulary must equal the
// rebuilt one.
template <typename T>
GlanModel<T> load_model(const std::filesystem::path& dir, const Dataset& dataset);

}  // namespace glan
