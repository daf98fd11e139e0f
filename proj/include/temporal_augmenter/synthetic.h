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

#ifndef TEMPORAL_AUGMENTER_SYNTHETIC_H_
#define TEMPORAL_AUGMENTER_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "temporal_augmenter/data.h"

namespace ta {

struct ToneCorpusOptions {
  std::vector<double> frequencies{300.0, 1000.0, 2500.0};  // Hz, one class each
  std::size_t clips_per_class = 200;
  int sample_rate = 8000;
  std::size_t clip_len = 800;  // samples
  double noise = 0.02;         // uniform noise amplitude
  std::uint64_t seed = 0;
};

// Writes root/tone_<freq>hz/clip_<i>.wav as 16-bit mono PCM. Each clip has a
// random phase and an amplitude drawn from [0.3, 0.9]. Returns the class
// directory names in sorted order.
std::vector<std::string> WriteToneCorpus(const std::filesystem::path& root,
                                         const ToneCorpusOptions& options);

struct ParityOptions {
  std::size_t length = 50;
  std::size_t early = 5;   // position of the first token
  std::size_t late = 44;   // position of the second token
  double noise = 0.1;      // uniform background amplitude
  std::uint64_t seed = 0;
};

// Sequences of low-amplitude noise with +-1 tokens at two positions; the
// label is 1 when the tokens differ. Shape [n x length x 1].
Dataset MakeParityDataset(std::size_t n, const ParityOptions& options);

// Uniform features in [-1, 1) with labels drawn independently of them.
Dataset MakeRandomLabelDataset(std::size_t n, std::size_t timesteps,
                               std::size_t channels, int num_classes,
                               std::uint64_t seed);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_SYNTHETIC_H_
