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

#include "glan/model/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "glan/errors.hpp"

namespace glan {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename N>
N parse_number(std::string_view key, std::string_view value) {
  N out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key " + std::string(key) + ": invalid number \"" + std::string(value) + "\"");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key " + std::string(key) + ": expected true/false");
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string_view ablation_name(Ablation a) {
  switch (a) {
    case Ablation::kFull: return "full";
    case Ablation::kNoLre: return "no_lre";
    case Ablation::kNoGre: return "no_gre";
    case Ablation::kOnlyText: return "only_text";
  }
  return "full";
}

std::optional<Ablation> parse_ablation(std::string_view name) {
  for (Ablation a : {Ablation::kFull, Ablation::kNoLre, Ablation::kNoGre, Ablation::kOnlyText}) {
    if (ablation_name(a) == name) return a;
  }
  return std::nullopt;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) throw ConfigError("empty entry in integer list");
    out.push_back(parse_number<int>("list", item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

TrainConfig TrainConfig::small() {
  TrainConfig c;
  c.d = 24;
  c.length = 16;
  c.widths = {3, 4, 5};
  c.filters_per_width = 8;
  c.heads = 4;
  c.global_heads = 4;
  c.layers = 2;
  c.user_dim = 16;
  c.lr = 5e-3;
  c.max_epochs = 60;
  c.patience = 10;
  return c;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(d > 0 && length > 0 && filters_per_width > 0, "d, length and filters must be positive");
  require(!widths.empty(), "at least one convolution width is required");
  for (int w : widths) require(w >= 1, "convolution widths must be positive");
  require(static_cast<long>(widths.size()) * filters_per_width == d,
          "widths x filters_per_width must equal d (" + std::to_string(widths.size()) + " x " +
              std::to_string(filters_per_width) + " != " + std::to_string(d) + ")");
  for (int w : widths) require(w <= length, "convolution width exceeds tweet length");
  require(heads > 0 && d % heads == 0, "d must be divisible by the local head count");
  require(global_heads > 0 && d % global_heads == 0, "d must be divisible by the global head count");
  require(layers >= 1, "at least one graph layer is required");
  require(user_dim > 0, "user_dim must be positive");
  require(batch > 0, "batch must be positive");
  require(lr > 0 && min_lr > 0, "learning rates must be positive");
  require(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1, "Adam betas must lie in [0, 1)");
  require(max_epochs > 0 && patience > 0 && decay_patience > 0, "epoch limits must be positive");
  require(min_count >= 1, "min_count must be at least 1");
  require(max_retweets >= 0, "max_retweets must be non-negative");
  require(neighbor_cap >= 1, "neighbor_cap must be positive");
  require(init_range > 0, "init_range must be positive");
}

std::string TrainConfig::to_text() const {
  std::ostringstream out;
  std::string w;
  for (std::size_t i = 0; i < widths.size(); ++i) w += (i ? "," : "") + std::to_string(widths[i]);
  out << "d = " << d << '\n'
      << "length = " << length << '\n'
      << "widths = " << w << '\n'
      << "filters_per_width = " << filters_per_width << '\n'
      << "min_count = " << min_count << '\n'
      << "heads = " << heads << '\n'
      << "global_heads = " << global_heads << '\n'
      << "layers = " << layers << '\n'
      << "user_dim = " << user_dim << '\n'
      << "per_head_scale = " << (per_head_scale ? "true" : "false") << '\n'
      << "max_retweets = " << max_retweets << '\n'
      << "neighbor_cap = " << neighbor_cap << '\n'
      << "batch = " << batch << '\n'
      << "lr = " << fmt_double(lr) << '\n'
      << "beta1 = " << fmt_double(beta1) << '\n'
      << "beta2 = " << fmt_double(beta2) << '\n'
      << "epsilon = " << fmt_double(epsilon) << '\n'
      << "lr_decay = " << fmt_double(lr_decay) << '\n'
      << "decay_patience = " << decay_patience << '\n'
      << "min_lr = " << fmt_double(min_lr) << '\n'
      << "max_epochs = " << max_epochs << '\n'
      << "patience = " << patience << '\n'
      << "mean_loss = " << (mean_loss ? "true" : "false") << '\n'
      << "init_range = " << fmt_double(init_range) << '\n'
      << "seed = " << seed << '\n'
      << "precision = " << (precision == Precision::k64 ? 64 : 32) << '\n'
      << "ablation = " << ablation_name(ablation) << '\n';
  return out.str();
}

void TrainConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "d") d = parse_number<int>(key, value);
  else if (key == "length") length = parse_number<int>(key, value);
  else if (key == "widths") widths = parse_int_list(value);
  else if (key == "filters_per_width") filters_per_width = parse_number<int>(key, value);
  else if (key == "min_count") min_count = parse_number<int>(key, value);
  else if (key == "heads") heads = parse_number<int>(key, value);
  else if (key == "global_heads") global_heads = parse_number<int>(key, value);
  else if (key == "layers") layers = parse_number<int>(key, value);
  else if (key == "user_dim") user_dim = parse_number<int>(key, value);
  else if (key == "per_head_scale") per_head_scale = parse_bool(key, value);
  else if (key == "max_retweets") max_retweets = parse_number<int>(key, value);
  else if (key == "neighbor_cap") neighbor_cap = parse_number<int>(key, value);
  else if (key == "batch") batch = parse_number<int>(key, value);
  else if (key == "lr") lr = parse_number<double>(key, value);
  else if (key == "beta1") beta1 = parse_number<double>(key, value);
  else if (key == "beta2") beta2 = parse_number<double>(key, value);
  else if (key == "epsilon") epsilon = parse_number<double>(key, value);
  else if (key == "lr_decay") lr_decay = parse_number<double>(key, value);
  else if (key == "decay_patience") decay_patience = parse_number<int>(key, value);
  else if (key == "min_lr") min_lr = parse_number<double>(key, value);
  else if (key == "max_epochs") max_epochs = parse_number<int>(key, value);
  else if (key == "patience") patience = parse_number<int>(key, value);
  else if (key == "mean_loss") mean_loss = parse_bool(key, value);
  else if (key == "init_range") init_range = parse_number<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "precision") {
    const int bits = parse_number<int>(key, value);
    if (bits != 32 && bits != 64) throw ConfigError("precision must be 32 or 64");
    precision = bits == 64 ? Precision::k64 : Precision::k32;
  } else if (key == "ablation") {
    auto a = parse_ablation(value);
    if (!a) throw ConfigError("unknown ablation mode \"" + std::string(value) + "\"");
    ablation = *a;
  } else {
    throw ConfigError("unknown config key \"" + std::string(key) + "\"");
  }
}

TrainConfig TrainConfig::parse(std::string_view text, TrainConfig base) {
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    base.set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return base;
}

TrainConfig TrainConfig::parse(std::string_view text) { return parse(text, TrainConfig{}); }

TrainConfig TrainConfig::load(const std::string& path) { return load(path, TrainConfig{}); }

TrainConfig TrainConfig::load(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), std::move(base));
}

}  // namespace glan
