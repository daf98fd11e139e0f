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

#include "temporal_augmenter/metrics.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"
#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/rng.h"

namespace ta {
namespace {

ConfusionMatrix Cm(int k, std::vector<std::int64_t> counts) {
  return ConfusionMatrix::FromCounts(k, std::move(counts));
}

TEST(ConfusionTest, PerfectTwoClass) {
  const std::vector<int> t{0, 0, 1, 1};
  const ConfusionMatrix cm = Confusion(t, t, 2);
  EXPECT_EQ(cm.counts(), (std::vector<std::int64_t>{2, 0, 0, 2}));
  EXPECT_EQ(cm.n(), 4);
}

TEST(ConfusionTest, AllPredictedZero) {
  const std::vector<int> t{0, 1, 2, 1}, p{0, 0, 0, 0};
  const ConfusionMatrix cm = Confusion(t, p, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 1; c < 3; ++c) EXPECT_EQ(cm.at(r, c), 0);
  }
  EXPECT_EQ(cm.ColSum(0), 4);
}

TEST(ConfusionTest, RandomPairsMatchTally) {
  Rng rng(1);
  std::vector<int> t(1000), p(1000);
  std::vector<std::int64_t> tally(16, 0);
  for (int i = 0; i < 1000; ++i) {
    t[i] = static_cast<int>(rng.Below(4));
    p[i] = static_cast<int>(rng.Below(4));
    ++tally[t[i] * 4 + p[i]];
  }
  EXPECT_EQ(Confusion(t, p, 4).counts(), tally);
}

TEST(ConfusionTest, OutOfRangeLabelThrows) {
  EXPECT_THROW(Confusion(std::vector<int>{0, 2}, std::vector<int>{0, 1}, 2), DataError);
  EXPECT_THROW(Confusion(std::vector<int>{0}, std::vector<int>{0, 1}, 2), DataError);
  EXPECT_THROW(Cm(2, {1, -1, 0, 0}), std::invalid_argument);
}

TEST(PerClassTest, Perfect) {
  for (const ClassStats& s : PerClassStats(Cm(2, {2, 0, 0, 2}))) {
    EXPECT_EQ(s.sensitivity, 1.0);
    EXPECT_EQ(s.specificity, 1.0);
    EXPECT_EQ(s.f1, 1.0);
    EXPECT_FALSE(s.degenerate);
  }
}

TEST(PerClassTest, HandTally) {
  const ClassStats s = PerClassStats(Cm(2, {4, 1, 2, 3}))[0];
  EXPECT_DOUBLE_EQ(s.sensitivity, 0.8);
  EXPECT_DOUBLE_EQ(s.specificity, 0.6);
  EXPECT_NEAR(s.f1, 0.72727, 5e-6);
  EXPECT_DOUBLE_EQ(s.accuracy, 0.7);
}

TEST(PerClassTest, ZeroSupportIsDegenerate) {
  const auto stats = PerClassStats(Cm(3, {3, 1, 0, 1, 2, 0, 0, 0, 0}));
  EXPECT_TRUE(stats[2].degenerate);
  EXPECT_EQ(stats[2].sensitivity, 0.0);
  EXPECT_EQ(stats[2].f1, 0.0);
  EXPECT_FALSE(stats[0].degenerate);
}

TEST(PerClassTest, ComplementIdentities) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> counts(16);
    for (auto& c : counts) c = 1 + static_cast<std::int64_t>(rng.Below(20));
    for (const ClassStats& s : PerClassStats(Cm(4, counts))) {
      EXPECT_NEAR(s.sensitivity, 1 - s.fnr, 1e-12);
      EXPECT_NEAR(s.specificity, 1 - s.fpr, 1e-12);
      EXPECT_NEAR(s.error_rate, 1 - s.accuracy, 1e-12);
    }
  }
}

TEST(PerClassTest, EmptyMatrixThrows) {
  EXPECT_THROW(PerClassStats(ConfusionMatrix(2)), DataError);
  EXPECT_THROW(ComputeOverallStats(ConfusionMatrix(2)), DataError);
}

TEST(OverallTest, PerfectKappa) {
  const OverallStats o = ComputeOverallStats(Cm(2, {2, 0, 0, 2}));
  EXPECT_EQ(o.kappa.kappa, 1.0);
  EXPECT_TRUE(o.kappa.defined);
}

TEST(OverallTest, HandCalculation) {
  const OverallStats o = ComputeOverallStats(Cm(2, {4, 1, 2, 3}));
  EXPECT_DOUBLE_EQ(o.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(o.p_e, 0.5);
  EXPECT_NEAR(o.kappa.kappa, 0.4, 1e-15);
  EXPECT_NEAR(o.kappa.standard_error, 0.28983, 5e-6);
  // Reference digits were computed from the rounded standard error.
  EXPECT_NEAR(o.kappa.ci95.lo, -0.16807, 1e-5);
  EXPECT_NEAR(o.kappa.ci95.hi, 0.96807, 1e-5);
  EXPECT_DOUBLE_EQ(o.f1, o.accuracy);
}

TEST(OverallTest, RadarReferenceValues) {
  const double p_o = 0.95775, kappa = 0.90839;
  const std::int64_t n = 71;
  const double p_e = (p_o - kappa) / (1 - kappa);
  const Interval acc = AccuracyInterval(p_o, n);
  const KappaStats k = CohenKappa(p_o, p_e, n);
  EXPECT_NEAR(acc.lo, 0.91095, 5e-5);
  EXPECT_EQ(acc.hi, 1.0);
  EXPECT_NEAR(k.kappa, kappa, 1e-12);
  EXPECT_NEAR(k.standard_error, 0.05176, 5e-5);
  EXPECT_NEAR(k.ci95.lo, 0.80693, 5e-5);
  EXPECT_EQ(k.ci95.hi, 1.0);
}

TEST(OverallTest, ChanceAgreementOfOneIsUndefined) {
  const OverallStats o = ComputeOverallStats(Cm(2, {5, 0, 0, 0}));
  EXPECT_FALSE(o.kappa.defined);
  EXPECT_EQ(o.kappa.kappa, 0.0);
}

TEST(OverallTest, IntervalsClippedAndOrdered) {
  const Interval lo = AccuracyInterval(0.01, 5);
  EXPECT_EQ(lo.lo, 0.0);
  const KappaStats k = CohenKappa(0.05, 0.5, 4);
  EXPECT_EQ(k.ci95.lo, -1.0);
  EXPECT_GE(k.ci95.lo, -1.0);
  EXPECT_LE(k.ci95.lo, k.kappa);
  EXPECT_LE(k.kappa, k.ci95.hi);
}

TEST(OverallTest, MatchesBruteForceOnRandomMatrices) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.Below(6));
    std::vector<std::int64_t> counts(k * k);
    for (auto& c : counts) c = static_cast<std::int64_t>(rng.Below(15));
    counts[0] += 1;
    const ConfusionMatrix cm = Cm(k, counts);
    const auto pairs = oracle::ExpandPairs(k, counts);
    const auto brute = oracle::BrutePerClass(k, pairs);
    const auto stats = PerClassStats(cm);
    for (int c = 0; c < k; ++c) {
      EXPECT_NEAR(stats[c].accuracy, brute[c].accuracy, 1e-12);
      EXPECT_NEAR(stats[c].f1, brute[c].f1, 1e-12);
      EXPECT_NEAR(stats[c].fpr, brute[c].fpr, 1e-12);
      EXPECT_NEAR(stats[c].fnr, brute[c].fnr, 1e-12);
      EXPECT_EQ(stats[c].degenerate, brute[c].degenerate);
    }
    const OverallStats o = ComputeOverallStats(cm);
    const auto b = oracle::BruteOverallStats(k, pairs);
    EXPECT_NEAR(o.accuracy, b.accuracy, 1e-12);
    EXPECT_NEAR(o.p_e, b.p_e, 1e-12);
    EXPECT_NEAR(o.fpr, b.fpr, 1e-12);
    EXPECT_NEAR(o.mean_ovr_accuracy, b.mean_ovr_accuracy, 1e-12);
    EXPECT_EQ(o.kappa.defined, b.kappa_defined);
    if (b.kappa_defined) EXPECT_NEAR(o.kappa.kappa, b.kappa, 1e-12);
  }
}

TEST(OverallTest, ClassPermutationInvariance) {
  const std::vector<std::int64_t> counts{5, 1, 2, 0, 7, 1, 3, 2, 9};
  const int perm[3] = {2, 0, 1};
  std::vector<std::int64_t> permuted(9);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) permuted[perm[r] * 3 + perm[c]] = counts[r * 3 + c];
  const auto a = PerClassStats(Cm(3, counts)), b = PerClassStats(Cm(3, permuted));
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(a[c].f1, b[perm[c]].f1);
  const OverallStats oa = ComputeOverallStats(Cm(3, counts));
  const OverallStats ob = ComputeOverallStats(Cm(3, permuted));
  EXPECT_NEAR(oa.kappa.kappa, ob.kappa.kappa, 1e-15);
  EXPECT_NEAR(oa.accuracy, ob.accuracy, 1e-15);
}

AucValue Auc(std::vector<double> pos, std::vector<double> neg) {
  std::vector<double> scores = pos;
  scores.insert(scores.end(), neg.begin(), neg.end());
  std::unique_ptr<bool[]> labels(new bool[scores.size()]);
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = i < pos.size();
  return BinaryAuc(scores, std::span<const bool>(labels.get(), scores.size()));
}

TEST(AucTest, Examples) {
  EXPECT_EQ(Auc({0.9, 0.8}, {0.1, 0.2}).value, 1.0);
  EXPECT_DOUBLE_EQ(Auc({0.8, 0.4}, {0.6, 0.2}).value, 0.75);
  EXPECT_DOUBLE_EQ(Auc({0.5, 0.5}, {0.5, 0.5, 0.5}).value, 0.5);
  EXPECT_FALSE(Auc({0.3}, {}).defined);
}

TEST(AucTest, OneVsRestMatchesPairwise) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 200;
    Tensor scores({n, 3});
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.Below(3));
      // Coarse values produce plenty of ties.
      for (int c = 0; c < 3; ++c) scores.at(i, c) = std::round(rng.Uniform() * 20) / 20;
    }
    const auto auc = AucOneVsRest(scores, labels);
    for (int c = 0; c < 3; ++c) {
      std::vector<double> col(n);
      std::vector<bool> pos(n);
      for (std::size_t i = 0; i < n; ++i) {
        col[i] = scores.at(i, c);
        pos[i] = labels[i] == c;
      }
      EXPECT_NEAR(auc[c].value, oracle::PairwiseAuc(col, pos), 1e-12);
    }
  }
}

TEST(AucTest, SingleClassFlagged) {
  const auto auc = AucOneVsRest(Tensor({3, 2}, 0.5), std::vector<int>{0, 0, 0});
  EXPECT_FALSE(auc[0].defined);
  EXPECT_FALSE(auc[1].defined);
}

}  // namespace
}  // namespace ta
