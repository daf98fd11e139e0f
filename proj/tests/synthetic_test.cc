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

#include <gtest/gtest.h>

#include "temporal_augmenter/data.h"
#include "temp_dir.h"

namespace ta {
namespace {

TEST(ToneCorpusTest, LayoutAndContent) {
  testing::TempDir dir;
  ToneCorpusOptions o;
  o.frequencies = {500.0, 1000.0};
  o.clips_per_class = 3;
  o.clip_len = 160;
  const auto names = WriteToneCorpus(dir.path(), o);
  EXPECT_EQ(names, (std::vector<std::string>{"tone_00500hz", "tone_01000hz"}));
  WavLoadOptions load;
  load.target_len = 160;
  const Dataset ds = LoadWavDir(dir.path(), load);
  EXPECT_EQ(ds.size(), 6u);
  EXPECT_EQ(ds.class_names, names);
  // A 1 kHz tone at 8 kHz crosses zero about 2 * 1000 * 160 / 8000 times.
  int crossings = 0;
  for (std::size_t t = 1; t < 160; ++t) {
    crossings += (ds.features.at(3, t - 1, 0) < 0) != (ds.features.at(3, t, 0) < 0);
  }
  EXPECT_NEAR(crossings, 40, 4);
  double peak = 0;
  for (std::size_t t = 0; t < 160; ++t) peak = std::max(peak, std::abs(ds.features.at(0, t, 0)));
  EXPECT_GT(peak, 0.25);
  EXPECT_LT(peak, 0.95);
}

TEST(ParityTest, LabelsFollowTokens) {
  ParityOptions o;
  o.length = 30;
  o.early = 3;
  o.late = 25;
  o.seed = 4;
  const Dataset ds = MakeParityDataset(400, o);
  EXPECT_EQ(ds.features.shape(), (Tensor::Shape{400, 30, 1}));
  int ones = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double a = ds.features.at(i, 3, 0), b = ds.features.at(i, 25, 0);
    EXPECT_EQ(std::abs(a), 1.0);
    EXPECT_EQ(std::abs(b), 1.0);
    EXPECT_EQ(ds.labels[i], a != b ? 1 : 0);
    EXPECT_LE(std::abs(ds.features.at(i, 10, 0)), o.noise);
    ones += ds.labels[i];
  }
  EXPECT_GT(ones, 150);
  EXPECT_LT(ones, 250);
  EXPECT_EQ(MakeParityDataset(400, o).features, ds.features);
}

TEST(RandomLabelTest, ShapeAndRange) {
  const Dataset ds = MakeRandomLabelDataset(50, 7, 2, 3, 9);
  EXPECT_EQ(ds.features.shape(), (Tensor::Shape{50, 7, 2}));
  EXPECT_EQ(ds.num_classes(), 3);
  for (double v : ds.features.values()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_NO_THROW(ds.Validate());
}

}  // namespace
}  // namespace ta
