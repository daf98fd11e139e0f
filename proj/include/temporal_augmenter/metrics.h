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

#ifndef TEMPORAL_AUGMENTER_METRICS_H_
#define TEMPORAL_AUGMENTER_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "temporal_augmenter/tensor.h"

namespace ta {

// k x k counts; rows are the true class, columns the predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int k);
  // Row-major counts; throws std::invalid_argument on negative entries.
  static ConfusionMatrix FromCounts(int k, std::vector<std::int64_t> counts);

  int k() const { return k_; }
  std::int64_t n() const { return n_; }
  std::int64_t at(int truth, int predicted) const {
    return counts_[truth * k_ + predicted];
  }
  void Add(int truth, int predicted);

  std::int64_t RowSum(int c) const;
  std::int64_t ColSum(int c) const;
  std::int64_t Trace() const;
  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  int k_;
  std::int64_t n_ = 0;
  std::vector<std::int64_t> counts_;
};

// Throws DataError on labels outside [0, k) or mismatched lengths.
ConfusionMatrix Confusion(std::span<const int> truth,
                          std::span<const int> predicted, int k);

// One-vs-rest statistics for one class. Any ratio with a zero denominator
// is reported as 0 and marks the class degenerate.
struct ClassStats {
  std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double error_rate = 0.0;
  double fnr = 0.0;
  double fpr = 0.0;
  double specificity = 0.0;
  double sensitivity = 0.0;
  double auc = 0.0;
  bool auc_defined = false;
  bool degenerate = false;
};

std::vector<ClassStats> PerClassStats(const ConfusionMatrix& cm);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct KappaStats {
  double kappa = 0.0;
  double standard_error = 0.0;
  Interval ci95;
  bool defined = false;  // false when p_e == 1
};

// kappa = (p_o - p_e) / (1 - p_e), SE = sqrt(p_o (1 - p_o) / (n (1 - p_e)^2)),
// CI = kappa +- 1.96 SE clipped to [-1, 1].
KappaStats CohenKappa(double p_o, double p_e, std::int64_t n);

// p +- 1.96 sqrt(p (1 - p) / n) clipped to [0, 1].
Interval AccuracyInterval(double p, std::int64_t n);

struct OverallStats {
  std::int64_t n = 0;
  double accuracy = 0.0;  // trace / n
  Interval accuracy_ci95;
  double mean_ovr_accuracy = 0.0;  // mean of per-class one-vs-rest accuracy
  double f1 = 0.0;                 // micro-averaged, equals accuracy
  double tpr = 0.0;                // micro-averaged
  double fnr = 0.0;
  double fpr = 0.0;
  double tnr = 0.0;
  double p_e = 0.0;
  KappaStats kappa;
};

// Throws DataError on an empty matrix.
OverallStats ComputeOverallStats(const ConfusionMatrix& cm);

struct AucValue {
  double value = 0.0;
  bool defined = false;  // false without at least one positive and negative
};

// Mann-Whitney rank statistic with midranks for ties.
AucValue BinaryAuc(std::span<const double> scores,
                   std::span<const bool> positive);

// One-vs-rest AUC of each class's score column against the labels.
std::vector<AucValue> AucOneVsRest(const Tensor& scores,
                                   std::span<const int> labels);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_METRICS_H_
