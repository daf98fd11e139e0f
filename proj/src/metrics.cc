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
#include <string>
#include <stdexcept>

#include "temporal_augmenter/errors.h"

namespace ta {
namespace {

constexpr double kZ95 = 1.96;

// num / den, or 0 with the flag raised when den is zero.
double Ratio(double num, double den, bool& degenerate) {
  if (den == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return num / den;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("confusion matrix needs k >= 1");
  counts_.assign(static_cast<std::size_t>(k) * k, 0);
}

ConfusionMatrix ConfusionMatrix::FromCounts(int k,
                                            std::vector<std::int64_t> counts) {
  ConfusionMatrix cm(k);
  if (counts.size() != cm.counts_.size()) {
    throw std::invalid_argument("confusion matrix: expected " +
                                std::to_string(cm.counts_.size()) + " counts");
  }
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("confusion matrix: negative count");
    cm.n_ += c;
  }
  cm.counts_ = std::move(counts);
  return cm;
}

void ConfusionMatrix::Add(int truth, int predicted) {
  if (truth < 0 || truth >= k_ || predicted < 0 || predicted >= k_) {
    throw DataError("confusion: label pair (" + std::to_string(truth) + ", " +
                    std::to_string(predicted) + ") outside [0, " +
                    std::to_string(k_) + ")");
  }
  ++counts_[truth * k_ + predicted];
  ++n_;
}

std::int64_t ConfusionMatrix::RowSum(int c) const {
  std::int64_t s = 0;
  for (int j = 0; j < k_; ++j) s += at(c, j);
  return s;
}

std::int64_t ConfusionMatrix::ColSum(int c) const {
  std::int64_t s = 0;
  for (int i = 0; i < k_; ++i) s += at(i, c);
  return s;
}

std::int64_t ConfusionMatrix::Trace() const {
  std::int64_t s = 0;
  for (int i = 0; i < k_; ++i) s += at(i, i);
  return s;
}

ConfusionMatrix Confusion(std::span<const int> truth,
                          std::span<const int> predicted, int k) {
  if (truth.size() != predicted.size()) {
    throw DataError("confusion: " + std::to_string(truth.size()) +
                    " labels but " + std::to_string(predicted.size()) +
                    " predictions");
  }
  ConfusionMatrix cm(k);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.Add(truth[i], predicted[i]);
  return cm;
}

std::vector<ClassStats> PerClassStats(const ConfusionMatrix& cm) {
  if (cm.n() == 0) throw DataError("per-class stats: empty confusion matrix");
  const double n = static_cast<double>(cm.n());
  std::vector<ClassStats> out(cm.k());
  for (int j = 0; j < cm.k(); ++j) {
    ClassStats& s = out[j];
    s.tp = cm.at(j, j);
    s.fn = cm.RowSum(j) - s.tp;
    s.fp = cm.ColSum(j) - s.tp;
    s.tn = cm.n() - s.tp - s.fn - s.fp;
    const double tp = s.tp, fn = s.fn, fp = s.fp, tn = s.tn;
    bool& flag = s.degenerate;
    s.sensitivity = Ratio(tp, tp + fn, flag);
    s.fnr = Ratio(fn, fn + tp, flag);
    s.specificity = Ratio(tn, tn + fp, flag);
    s.fpr = Ratio(fp, fp + tn, flag);
    s.f1 = Ratio(2.0 * tp, 2.0 * tp + fp + fn, flag);
    s.accuracy = (tp + tn) / n;
    s.error_rate = (fp + fn) / n;
  }
  return out;
}

Interval AccuracyInterval(double p, std::int64_t n) {
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

KappaStats CohenKappa(double p_o, double p_e, std::int64_t n) {
  KappaStats k;
  if (p_e >= 1.0) return k;
  k.defined = true;
  const double q = 1.0 - p_e;
  k.kappa = (p_o - p_e) / q;
  k.standard_error =
      std::sqrt(p_o * (1.0 - p_o) / (static_cast<double>(n) * q * q));
  k.ci95 = {std::max(-1.0, k.kappa - kZ95 * k.standard_error),
            std::min(1.0, k.kappa + kZ95 * k.standard_error)};
  return k;
}

OverallStats ComputeOverallStats(const ConfusionMatrix& cm) {
  if (cm.n() == 0) throw DataError("overall stats: empty confusion matrix");
  OverallStats s;
  s.n = cm.n();
  const double n = static_cast<double>(cm.n());
  const double correct = static_cast<double>(cm.Trace());
  s.accuracy = correct / n;
  s.accuracy_ci95 = AccuracyInterval(s.accuracy, cm.n());
  s.f1 = s.accuracy;
  s.tpr = s.accuracy;
  s.fnr = 1.0 - s.tpr;
  // Micro FPR: every misclassification is one false positive among the
  // n (k - 1) one-vs-rest negatives.
  s.fpr = cm.k() > 1 ? (n - correct) / (n * (cm.k() - 1)) : 0.0;
  s.tnr = 1.0 - s.fpr;
  double chance = 0.0;
  for (int j = 0; j < cm.k(); ++j) {
    chance += static_cast<double>(cm.RowSum(j)) * static_cast<double>(cm.ColSum(j));
  }
  s.p_e = chance / (n * n);
  s.kappa = CohenKappa(s.accuracy, s.p_e, cm.n());
  const auto classes = PerClassStats(cm);
  for (const ClassStats& c : classes) s.mean_ovr_accuracy += c.accuracy;
  s.mean_ovr_accuracy /= static_cast<double>(classes.size());
  return s;
}

AucValue BinaryAuc(std::span<const double> scores,
                   std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw DimensionError("auc: scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  double pos = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]]) {
        positive_rank_sum += midrank;
        pos += 1.0;
      }
    }
    i = j;
  }
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) return {};
  return {(positive_rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg), true};
}

std::vector<AucValue> AucOneVsRest(const Tensor& scores,
                                   std::span<const int> labels) {
  if (scores.rank() != 2 || scores.dim(0) != labels.size()) {
    throw DimensionError("auc: scores " + scores.ShapeString() + " vs " +
                         std::to_string(labels.size()) + " labels");
  }
  const std::size_t n = scores.dim(0), k = scores.dim(1);
  std::vector<AucValue> out(k);
  std::vector<double> column(n);
  std::unique_ptr<bool[]> positive(new bool[n]);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = scores.at(i, c);
      positive[i] = labels[i] == static_cast<int>(c);
    }
    out[c] = BinaryAuc(column, std::span<const bool>(positive.get(), n));
  }
  return out;
}

}  // namespace ta
