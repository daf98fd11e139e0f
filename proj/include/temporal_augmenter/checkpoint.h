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

#ifndef TEMPORAL_AUGMENTER_CHECKPOINT_H_
#define TEMPORAL_AUGMENTER_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "temporal_augmenter/model.h"
#include "temporal_augmenter/tensor.h"

// Checkpoint container, version 1. All integers little-endian.
//
//   bytes 0..7   magic "TAUGCKPT"
//   u32          format version (1)
//   u32 + bytes  model config as "key=value" lines
//   u32 + bytes  free-form metadata as "key=value" lines
//   u32          tensor count, then per tensor:
//                  u32 + bytes  name
//                  u32          rank, followed by rank x u64 dims
//                  f64 x size   values, row-major, IEEE-754 binary64
//
// Model parameters use the names from NamedTensors(); any other tensors
// (for example scaler statistics) are carried as extras.

namespace ta {

inline constexpr std::uint32_t kCheckpointVersion = 1;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Model config as ordered key/value pairs under the "model." prefix.
KeyValues ModelConfigEntries(const ModelConfig& config);
// Applies one "model.*" key. Returns false for keys outside that prefix;
// throws ConfigError for unknown model keys or unparsable values.
bool SetModelConfigField(ModelConfig& config, const std::string& key,
                         const std::string& value);

std::string FormatDouble(double v);

struct Checkpoint {
  TemporalAugmenterModel model;
  std::map<std::string, std::string> metadata;
  std::map<std::string, Tensor> extras;
};

void SaveCheckpoint(const std::filesystem::path& path,
                    const TemporalAugmenterModel& model,
                    const std::map<std::string, std::string>& metadata = {},
                    const std::map<std::string, Tensor>& extras = {});

// Throws DataError on unreadable, truncated or version-mismatched files.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_CHECKPOINT_H_
