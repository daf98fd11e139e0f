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

#include "temporal_augmenter/init.h"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.h"
#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/rng.h"

namespace ta {
namespace {

TEST(InitTest, GlorotLimits) {
  EXPECT_DOUBLE_EQ(GlorotLimit(2, 4), 1.0);
  EXPECT_NEAR(GlorotLimit(128, 10), 0.20851, 5e-6);
  EXPECT_THROW(GlorotLimit(0, 3), ConfigError);
}

TEST(InitTest, HeLimits) {
  EXPECT_DOUBLE_EQ(HeLimit(6), 1.0);
  EXPECT_NEAR(HeLimit(1), 2.4495, 5e-5);
  EXPECT_THROW(HeLimit(-1), ConfigError);
}

TEST(InitTest, GlorotDrawsBoundedWithZeroMean) {
  Rng rng(1);
  const Tensor t = InitGlorotUniform(128, 10, {100000}, rng);
  const double limit = GlorotLimit(128, 10);
  double sum = 0, max_abs = 0;
  for (double v : t.values()) {
    sum += v;
    max_abs = std::max(max_abs, std::abs(v));
  }
  EXPECT_LE(max_abs, limit);
  const double sigma = limit / std::sqrt(3.0) / std::sqrt(1e5);
  EXPECT_NEAR(sum / 1e5, 0.0, 3 * sigma);
}

TEST(InitTest, HeDrawsBounded) {
  Rng rng(2);
  const Tensor t = InitHeUniform(1, {100000}, rng);
  for (double v : t.values()) ASSERT_LE(std::abs(v), HeLimit(1));
}

TEST(InitTest, OrthogonalOneByOneIsUnit) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(std::abs(InitOrthogonal(1, 1, rng)[0]), 1.0);
  }
}

TEST(InitTest, OrthogonalSquareIsOrthonormal) {
  Rng rng(4);
  const Tensor q = InitOrthogonal(10, 10, rng);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      double s = 0;
      for (int r = 0; r < 10; ++r) s += q.at(r, i) * q.at(r, j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-10);
    }
  }
  Tensor v({10, 1});
  for (double& x : v.values()) x = rng.Normal();
  const Tensor qv = oracle::NaiveMatmul(q, v);
  EXPECT_NEAR(std::sqrt(oracle::Dot(qv, qv)), std::sqrt(oracle::Dot(v, v)), 1e-10);
}

TEST(InitTest, OrthogonalRectangular) {
  Rng rng(5);
  const Tensor tall = InitOrthogonal(8, 3, rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int r = 0; r < 8; ++r) s += tall.at(r, i) * tall.at(r, j);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-10);
    }
  }
  const Tensor wide = InitOrthogonal(3, 8, rng);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int c = 0; c < 8; ++c) s += wide.at(i, c) * wide.at(j, c);
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(InitTest, SameSeedSameDraw) {
  Rng a(6), b(6);
  EXPECT_EQ(InitOrthogonal(5, 5, a), InitOrthogonal(5, 5, b));
  EXPECT_EQ(InitGlorotUniform(3, 4, {3, 4}, a), InitGlorotUniform(3, 4, {3, 4}, b));
}

}  // namespace
}  // namespace ta
