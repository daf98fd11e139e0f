/*
 * Copyright 2026 The TemporalAugmenter Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "temporal_augmenter/config.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/rng.h"
#include "parse_util.h"

namespace ta {
namespace {

using internal::ParseBool;
using internal::ParseDouble;
using internal::ParseInt;
using internal::ParseU64;

std::string SchemaName(CsvSchema::Kind kind) {
  switch (kind) {
    case CsvSchema::Kind::kMitBih:
      return "mitbih";
    case CsvSchema::Kind::kIonosphere:
      return "ionosphere";
    case CsvSchema::Kind::kGeneric:
      return "generic";
  }
  return "generic";
}

std::string JoinPaths(const std::vector<std::filesystem::path>& paths) {
  std::string out;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (i) out += ",";
    out += paths[i].string();
  }
  return out;
}

// Both optimizers read lr and epsilon from the same keys, so a preset
// switch between them keeps user overrides.
void SetLearningRate(TrainConfig& t, double lr) {
  t.optimizer.adam.lr = lr;
  t.optimizer.rmsprop.lr = lr;
}

void SetEpsilon(TrainConfig& t, double eps) {
  t.optimizer.adam.epsilon = eps;
  t.optimizer.rmsprop.epsilon = eps;
}

}  // namespace

std::string PresetName(Preset preset) {
  switch (preset) {
    case Preset::kCustom:
      return "custom";
    case Preset::kTess:
      return "tess";
    case Preset::kMitBih:
      return "mitbih";
    case Preset::kIonosphere:
      return "ionosphere";
  }
  return "custom";
}

Preset ParsePreset(const std::string& name) {
  if (name == "custom") return Preset::kCustom;
  if (name == "tess") return Preset::kTess;
  if (name == "mitbih") return Preset::kMitBih;
  if (name == "ionosphere") return Preset::kIonosphere;
  throw ConfigError("config: unknown preset '" + name +
                    "' (expected tess|mitbih|ionosphere|custom)");
}

std::vector<std::filesystem::path> DataConfig::ResolvedPaths() const {
  std::filesystem::path base = root;
  if (base.empty()) {
    if (const char* env = std::getenv(kDataRootEnv); env && *env) base = env;
  }
  std::vector<std::filesystem::path> out;
  for (const auto& p : paths) {
    out.push_back(p.is_absolute() || base.empty() ? p : base / p);
  }
  return out;
}

RunConfig PresetConfig(Preset preset) {
  RunConfig c;
  c.preset = preset;
  TrainConfig& t = c.train;
  switch (preset) {
    case Preset::kCustom:
      break;
    case Preset::kTess:
      c.data.kind = DataKind::kWav;
      c.data.paths = {"tess"};
      c.split = {0.7, 0.1, 0.2, 0, false};
      t.batch_size = 32;
      t.epochs = 20;
      t.optimizer.kind = OptimizerKind::kRmsProp;
      t.optimizer.rmsprop.momentum = 0.0;
      c.model.dropout_stream = 0.2;
      c.model.dropout_head = 0.2;
      break;
    case Preset::kMitBih:
      c.data.kind = DataKind::kCsv;
      c.data.paths = {"mitbih_train.csv", "mitbih_test.csv"};
      c.data.schema.kind = CsvSchema::Kind::kMitBih;
      c.split = {0.6, 0.2, 0.2, 0, true};
      t.batch_size = 128;
      t.epochs = 50;
      t.optimizer.kind = OptimizerKind::kAdam;
      c.model.dropout_stream = 0.5;
      c.model.dropout_head = 0.3;
      break;
    case Preset::kIonosphere:
      c.data.kind = DataKind::kCsv;
      c.data.paths = {"ionosphere.data"};
      c.data.schema.kind = CsvSchema::Kind::kIonosphere;
      c.split = {0.6, 0.2, 0.2, 0, false};
      t.batch_size = 128;
      t.epochs = 100;
      t.optimizer.kind = OptimizerKind::kAdam;
      c.model.dropout_stream = 0.2;
      c.model.dropout_head = 0.2;
      break;
  }
  SetLearningRate(t, 1e-3);
  SetEpsilon(t, 1e-7);
  return c;
}

void ApplyConfigKey(RunConfig& c, const std::string& key,
                    const std::string& value) {
  DataConfig& d = c.data;
  TrainConfig& t = c.train;
  if (key == "preset") {
    c.preset = ParsePreset(value);
  } else if (key == "seed") {
    c.seed = ParseU64(key, value);
  } else if (key == "data.kind") {
    if (value == "csv") {
      d.kind = DataKind::kCsv;
    } else if (value == "wav") {
      d.kind = DataKind::kWav;
    } else {
      throw ConfigError("config: data.kind must be csv|wav");
    }
  } else if (key == "data.path") {
    d.paths.clear();
    for (const auto& p : internal::SplitList(value)) d.paths.emplace_back(p);
    if (d.paths.empty()) throw ConfigError("config: data.path is empty");
  } else if (key == "data.root") {
    d.root = value;
  } else if (key == "data.schema") {
    d.schema.kind = ParseSchemaKind(value);
  } else if (key == "data.label_column") {
    d.schema.label_column = value;
  } else if (key == "data.channels") {
    d.schema.channels = ParseInt(key, value);
  } else if (key == "data.wav_target_len") {
    d.wav.target_len = ParseU64(key, value);
  } else if (key == "data.wav_mode") {
    if (value == "raw") {
      d.wav.mode = WavFeatureMode::kRaw;
    } else if (value == "frame_energy") {
      d.wav.mode = WavFeatureMode::kFrameEnergy;
    } else {
      throw ConfigError("config: data.wav_mode must be raw|frame_energy");
    }
  } else if (key == "data.wav_frame_len") {
    d.wav.frame_len = ParseU64(key, value);
  } else if (key == "data.standardize") {
    d.standardize = ParseBool(key, value);
  } else if (key == "data.max_rows") {
    d.max_rows = ParseU64(key, value);
  } else if (key == "split.train") {
    c.split.train = ParseDouble(key, value);
  } else if (key == "split.val") {
    c.split.val = ParseDouble(key, value);
  } else if (key == "split.test") {
    c.split.test = ParseDouble(key, value);
  } else if (key == "split.stratified") {
    c.split.stratified = ParseBool(key, value);
  } else if (key == "train.optimizer") {
    if (value == "adam") {
      t.optimizer.kind = OptimizerKind::kAdam;
    } else if (value == "rmsprop") {
      t.optimizer.kind = OptimizerKind::kRmsProp;
    } else {
      throw ConfigError("config: train.optimizer must be adam|rmsprop");
    }
  } else if (key == "train.lr") {
    SetLearningRate(t, ParseDouble(key, value));
  } else if (key == "train.epsilon") {
    SetEpsilon(t, ParseDouble(key, value));
  } else if (key == "train.rho") {
    t.optimizer.rmsprop.rho = ParseDouble(key, value);
  } else if (key == "train.momentum") {
    t.optimizer.rmsprop.momentum = ParseDouble(key, value);
  } else if (key == "train.beta1") {
    t.optimizer.adam.beta1 = ParseDouble(key, value);
  } else if (key == "train.beta2") {
    t.optimizer.adam.beta2 = ParseDouble(key, value);
  } else if (key == "train.batch_size") {
    t.batch_size = ParseInt(key, value);
  } else if (key == "train.epochs") {
    t.epochs = ParseInt(key, value);
  } else if (key == "train.shuffle") {
    t.shuffle = ParseBool(key, value);
  } else if (key == "train.clip_norm") {
    t.clip_norm = ParseDouble(key, value);
  } else if (!SetModelConfigField(c.model, key, value)) {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void RunConfig::Validate() const {
  for (double r : {split.train, split.val, split.test}) {
    if (!(r > 0.0 && r < 1.0)) {
      throw ConfigError("config: split ratios must lie in (0, 1)");
    }
  }
  if (std::abs(split.train + split.val + split.test - 1.0) > 1e-9) {
    throw ConfigError("config: split ratios must sum to 1");
  }
  if (data.paths.empty()) throw ConfigError("config: data.path is not set");
  if (data.kind == DataKind::kWav && data.paths.size() != 1) {
    throw ConfigError("config: wav data takes exactly one directory");
  }
  if (data.kind == DataKind::kCsv &&
      data.schema.kind == CsvSchema::Kind::kGeneric &&
      data.schema.label_column.empty()) {
    throw ConfigError("config: generic csv schema needs data.label_column");
  }
  if (data.schema.channels < 1) {
    throw ConfigError("config: data.channels must be positive");
  }
  if (data.wav.target_len == 0 || data.wav.frame_len == 0) {
    throw ConfigError("config: wav lengths must be positive");
  }
  train.Validate();
  // Shape fields come from the data; check the rest with a stand-in length.
  ModelConfig m = model;
  if (m.input_timesteps == 0) m.input_timesteps = m.conv_kernel + m.pool_size - 1;
  m.Validate();
}

RunConfig ParseRunConfig(const std::string& text) {
  KeyValues entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = internal::Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(number) +
                        ": expected key = value");
    }
    std::string key = internal::Trim(std::string_view(line).substr(0, eq));
    std::string value = internal::Trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(number) +
                        ": empty key");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(number) +
                        ": duplicate key '" + key + "'");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  Preset preset = Preset::kCustom;
  for (const auto& [key, value] : entries) {
    if (key == "preset") preset = ParsePreset(value);
  }
  RunConfig config = PresetConfig(preset);
  for (const auto& [key, value] : entries) {
    if (key == "preset") continue;
    ApplyConfigKey(config, key, value);
    config.overrides.emplace_back(key, value);
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseRunConfig(text.str());
}

KeyValues RunConfigEntries(const RunConfig& c) {
  const TrainConfig& t = c.train;
  const bool adam = t.optimizer.kind == OptimizerKind::kAdam;
  KeyValues kv = {
      {"preset", PresetName(c.preset)},
      {"seed", std::to_string(c.seed)},
      {"data.kind", c.data.kind == DataKind::kCsv ? "csv" : "wav"},
      {"data.path", JoinPaths(c.data.paths)},
  };
  if (!c.data.root.empty()) kv.emplace_back("data.root", c.data.root.string());
  kv.insert(kv.end(), {
      {"data.schema", SchemaName(c.data.schema.kind)},
  });
  if (!c.data.schema.label_column.empty()) {
    kv.emplace_back("data.label_column", c.data.schema.label_column);
  }
  kv.insert(kv.end(), {
      {"data.channels", std::to_string(c.data.schema.channels)},
      {"data.wav_target_len", std::to_string(c.data.wav.target_len)},
      {"data.wav_mode",
       c.data.wav.mode == WavFeatureMode::kRaw ? "raw" : "frame_energy"},
      {"data.wav_frame_len", std::to_string(c.data.wav.frame_len)},
      {"data.standardize", c.data.standardize ? "true" : "false"},
      {"data.max_rows", std::to_string(c.data.max_rows)},
      {"split.train", FormatDouble(c.split.train)},
      {"split.val", FormatDouble(c.split.val)},
      {"split.test", FormatDouble(c.split.test)},
      {"split.stratified", c.split.stratified ? "true" : "false"},
      {"train.optimizer", adam ? "adam" : "rmsprop"},
      {"train.lr", FormatDouble(adam ? t.optimizer.adam.lr
                                     : t.optimizer.rmsprop.lr)},
      {"train.epsilon", FormatDouble(adam ? t.optimizer.adam.epsilon
                                          : t.optimizer.rmsprop.epsilon)},
      {"train.rho", FormatDouble(t.optimizer.rmsprop.rho)},
      {"train.momentum", FormatDouble(t.optimizer.rmsprop.momentum)},
      {"train.beta1", FormatDouble(t.optimizer.adam.beta1)},
      {"train.beta2", FormatDouble(t.optimizer.adam.beta2)},
      {"train.batch_size", std::to_string(t.batch_size)},
      {"train.epochs", std::to_string(t.epochs)},
      {"train.shuffle", t.shuffle ? "true" : "false"},
      {"train.clip_norm", FormatDouble(t.clip_norm)},
  });
  for (auto& entry : ModelConfigEntries(c.model)) kv.push_back(entry);
  return kv;
}

std::string FormatRunConfig(const RunConfig& config) {
  std::string out;
  for (const auto& [k, v] : RunConfigEntries(config)) out += k + " = " + v + "\n";
  return out;
}

RunSeeds DeriveSeeds(std::uint64_t seed) {
  const Rng root(seed);
  return {root.Fork(1).NextU64(), root.Fork(2).NextU64(),
          root.Fork(3).NextU64(), root.Fork(4).NextU64()};
}

}  // namespace ta
