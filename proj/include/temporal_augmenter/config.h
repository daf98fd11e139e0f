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

#ifndef TEMPORAL_AUGMENTER_CONFIG_H_
#define TEMPORAL_AUGMENTER_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "temporal_augmenter/checkpoint.h"
#include "temporal_augmenter/data.h"
#include "temporal_augmenter/model.h"
#include "temporal_augmenter/optim.h"

namespace ta {

// Environment variable naming the directory that relative data paths are
// resolved against.
inline constexpr const char* kDataRootEnv = "TA_DATA_ROOT";

enum class Preset { kCustom, kTess, kMitBih, kIonosphere };

std::string PresetName(Preset preset);
Preset ParsePreset(const std::string& name);

enum class DataKind { kCsv, kWav };

struct DataConfig {
  DataKind kind = DataKind::kCsv;
  // One or more files (csv) or a single class-per-directory root (wav).
  // Several csv files are concatenated in order.
  std::vector<std::filesystem::path> paths;
  std::filesystem::path root;  // empty: $TA_DATA_ROOT, then the cwd
  CsvSchema schema;
  WavLoadOptions wav;
  bool standardize = true;
  // Stratified subsample of this many rows before splitting; 0 keeps all.
  std::size_t max_rows = 0;

  std::vector<std::filesystem::path> ResolvedPaths() const;
};

// Everything one training run needs. Built from a preset and then
// overridden key by key.
struct RunConfig {
  Preset preset = Preset::kCustom;
  DataConfig data;
  ModelConfig model;
  TrainConfig train;
  SplitSpec split;
  std::uint64_t seed = 0;

  // Keys given explicitly, in file order, after preset expansion.
  KeyValues overrides;

  void Validate() const;
};

// The preset's settings with no overrides applied.
RunConfig PresetConfig(Preset preset);

// Applies one key. Throws ConfigError for unknown keys or bad values.
void ApplyConfigKey(RunConfig& config, const std::string& key,
                    const std::string& value);

// Flat text: one "key = value" per line, '#' starts a comment, blank lines
// ignored. A "preset" key, wherever it appears, is expanded first; every
// other key then overrides it in file order. Throws ConfigError with the
// line number on malformed input.
RunConfig ParseRunConfig(const std::string& text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Every setting as ordered key/value pairs; applying them with
// ApplyConfigKey to PresetConfig(preset) reproduces the config.
KeyValues RunConfigEntries(const RunConfig& config);

// Canonical key = value listing that ParseRunConfig reads back unchanged.
std::string FormatRunConfig(const RunConfig& config);

// Seeds of the independent random streams used by one run.
struct RunSeeds {
  std::uint64_t split;
  std::uint64_t subsample;
  std::uint64_t init;
  std::uint64_t train;
};
RunSeeds DeriveSeeds(std::uint64_t seed);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_CONFIG_H_
