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

#ifndef TEMPORAL_AUGMENTER_DATA_H_
#define TEMPORAL_AUGMENTER_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "temporal_augmenter/tensor.h"

namespace ta {

struct Dataset {
  Tensor features;  // [n x T x d]
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return labels.size(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::size_t timesteps() const { return features.dim(1); }
  std::size_t channels() const { return features.dim(2); }

  // Throws DataError when an invariant is broken: n >= 1, labels in [0, k),
  // unique class names, features [n x T x d].
  void Validate() const;
};

// Rows picked by index, in the given order.
Dataset Subset(const Dataset& ds, std::span<const std::size_t> rows);
// Features of the given rows as one [rows x T x d] batch.
Tensor GatherRows(const Tensor& features, std::span<const std::size_t> rows);

struct CsvSchema {
  enum class Kind {
    kMitBih,      // 187 samples + numeric label 0..4, no header
    kIonosphere,  // 34 attributes + b/g token, no header
    kGeneric,     // header row, named label column
  };
  Kind kind = Kind::kGeneric;
  std::string label_column;  // generic only
  int channels = 1;          // generic only: features reshaped to [F/c x c]
};

CsvSchema::Kind ParseSchemaKind(const std::string& name);

// Parse errors name the 1-based row and column.
Dataset LoadCsvSignals(const std::filesystem::path& path,
                       const CsvSchema& schema);

struct WavAudio {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::vector<double> samples;  // mono (channel mean), scaled to [-1, 1)
};

// RIFF PCM, 8-bit unsigned or 16-bit signed. Anything else is a DataError.
WavAudio ReadWav(const std::filesystem::path& path);
void WriteWavPcm16(const std::filesystem::path& path,
                   std::span<const double> samples, int sample_rate,
                   int channels = 1);

enum class WavFeatureMode {
  kRaw,          // one value per sample
  kFrameEnergy,  // mean square over non-overlapping frames
};

struct WavLoadOptions {
  std::size_t target_len = 16000;  // samples after crop / zero-pad
  WavFeatureMode mode = WavFeatureMode::kRaw;
  std::size_t frame_len = 160;  // frame-energy mode only
};

// One class per subdirectory of root, sorted by name; files sorted by name.
Dataset LoadWavDir(const std::filesystem::path& root,
                   const WavLoadOptions& options);

// Per-feature statistics over the flattened T*d feature vector.
struct ScalerParams {
  Tensor mean;  // [T*d]
  Tensor std;   // [T*d]
};

// Population std. Constant features (std < 1e-12) get mean 0 and std 1 so
// they pass through unchanged.
ScalerParams FitScaler(const Dataset& ds);
Dataset ApplyScaler(const ScalerParams& params, const Dataset& ds);

struct SplitSpec {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
  std::uint64_t seed = 0;
  bool stratified = false;
};

struct SplitResult {
  Dataset train, val, test;
  std::vector<std::size_t> train_rows, val_rows, test_rows;
};

// Seeded shuffle, then floor(n * ratio) rows to val and test with the
// remainder going to train. Stratified mode applies that rule per class.
SplitResult Split(const Dataset& ds, const SplitSpec& spec);

// count rows drawn without replacement, proportionally per class.
std::vector<std::size_t> StratifiedSample(const Dataset& ds, std::size_t count,
                                          std::uint64_t seed);

Tensor OneHot(std::span<const int> labels, int num_classes);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_DATA_H_
