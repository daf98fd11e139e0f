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

#include "temporal_augmenter/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/rng.h"

namespace ta {

std::vector<std::string> WriteToneCorpus(const std::filesystem::path& root,
                                         const ToneCorpusOptions& options) {
  if (options.frequencies.size() < 2 || options.clips_per_class == 0 ||
      options.clip_len == 0 || options.sample_rate <= 0) {
    throw ConfigError("tone corpus: need >= 2 frequencies and positive sizes");
  }
  Rng rng(options.seed);
  std::vector<std::string> names;
  std::vector<double> samples(options.clip_len);
  for (double freq : options.frequencies) {
    char name[32];
    std::snprintf(name, sizeof name, "tone_%05.0fhz", freq);
    names.emplace_back(name);
    const std::filesystem::path dir = root / name;
    std::filesystem::create_directories(dir);
    const double omega = 2.0 * std::numbers::pi * freq / options.sample_rate;
    for (std::size_t clip = 0; clip < options.clips_per_class; ++clip) {
      const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      const double amplitude = rng.Uniform(0.3, 0.9);
      for (std::size_t t = 0; t < samples.size(); ++t) {
        samples[t] = amplitude * std::sin(omega * static_cast<double>(t) + phase) +
                     options.noise * rng.Uniform(-1.0, 1.0);
      }
      char file[32];
      std::snprintf(file, sizeof file, "clip_%04zu.wav", clip);
      WriteWavPcm16(dir / file, samples, options.sample_rate);
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

Dataset MakeParityDataset(std::size_t n, const ParityOptions& options) {
  if (options.early >= options.length || options.late >= options.length) {
    throw ConfigError("parity: token positions must lie inside the sequence");
  }
  Rng rng(options.seed);
  Dataset ds;
  ds.features = Tensor({n, options.length, 1});
  ds.labels.resize(n);
  ds.class_names = {"same", "different"};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < options.length; ++t) {
      ds.features.at(i, t, 0) = options.noise * rng.Uniform(-1.0, 1.0);
    }
    const bool a = rng.Below(2) == 1;
    const bool b = rng.Below(2) == 1;
    ds.features.at(i, options.early, 0) = a ? 1.0 : -1.0;
    ds.features.at(i, options.late, 0) = b ? 1.0 : -1.0;
    ds.labels[i] = a != b ? 1 : 0;
  }
  return ds;
}

Dataset MakeRandomLabelDataset(std::size_t n, std::size_t timesteps,
                               std::size_t channels, int num_classes,
                               std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.features = Tensor({n, timesteps, channels});
  for (double& v : ds.features.values()) v = rng.Uniform(-1.0, 1.0);
  ds.labels.resize(n);
  for (int& y : ds.labels) y = static_cast<int>(rng.Below(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    ds.class_names.push_back("class_" + std::to_string(c));
  }
  return ds;
}

}  // namespace ta
