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

// Independent reference implementations used as test oracles. They work
// from definitions (expanded label pairs, nested loops, pair counting) and
// share no code with the library.

#ifndef TEMPORAL_AUGMENTER_TESTS_ORACLES_H_
#define TEMPORAL_AUGMENTER_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "temporal_augmenter/tensor.h"

namespace ta::oracle {

inline Tensor NaiveMatmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor c({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a.at(i, p) * b.at(p, j);
      c.at(i, j) = s;
    }
  }
  return c;
}

struct BruteClass {
  double accuracy, f1, error_rate, fnr, fpr, specificity, sensitivity;
  bool degenerate;
};

struct BruteOverall {
  double accuracy, ci_lo, ci_hi, mean_ovr_accuracy, f1, tpr, fnr, fpr, tnr;
  double p_e, kappa, kappa_se, kappa_lo, kappa_hi;
  bool kappa_defined;
};

// Expands a row-major k x k count matrix into (truth, predicted) pairs.
inline std::vector<std::pair<int, int>> ExpandPairs(
    int k, const std::vector<std::int64_t>& counts) {
  std::vector<std::pair<int, int>> pairs;
  for (int t = 0; t < k; ++t) {
    for (int p = 0; p < k; ++p) {
      for (std::int64_t c = 0; c < counts[t * k + p]; ++c) pairs.emplace_back(t, p);
    }
  }
  return pairs;
}

inline double SafeRatio(double num, double den, bool& degenerate) {
  if (den == 0.0) {
    degenerate = true;
    return 0.0;
  }
  return num / den;
}

inline std::vector<BruteClass> BrutePerClass(
    int k, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<BruteClass> out;
  const double n = static_cast<double>(pairs.size());
  for (int c = 0; c < k; ++c) {
    double tp = 0, fn = 0, fp = 0, tn = 0;
    for (const auto& [t, p] : pairs) {
      const bool is_t = t == c, is_p = p == c;
      if (is_t && is_p) tp += 1;
      else if (is_t) fn += 1;
      else if (is_p) fp += 1;
      else tn += 1;
    }
    BruteClass s{};
    s.degenerate = false;
    s.accuracy = (tp + tn) / n;
    s.error_rate = (fp + fn) / n;
    s.sensitivity = SafeRatio(tp, tp + fn, s.degenerate);
    s.fnr = SafeRatio(fn, tp + fn, s.degenerate);
    s.specificity = SafeRatio(tn, tn + fp, s.degenerate);
    s.fpr = SafeRatio(fp, tn + fp, s.degenerate);
    s.f1 = SafeRatio(2 * tp, 2 * tp + fp + fn, s.degenerate);
    out.push_back(s);
  }
  return out;
}

inline BruteOverall BruteOverallStats(
    int k, const std::vector<std::pair<int, int>>& pairs) {
  const double n = static_cast<double>(pairs.size());
  double agree = 0;
  for (const auto& [t, p] : pairs) agree += t == p;
  BruteOverall o{};
  o.accuracy = agree / n;
  const double half = 1.96 * std::sqrt(o.accuracy * (1 - o.accuracy) / n);
  o.ci_lo = std::max(0.0, o.accuracy - half);
  o.ci_hi = std::min(1.0, o.accuracy + half);
  double ovr = 0;
  for (int c = 0; c < k; ++c) {
    double right = 0;
    for (const auto& [t, p] : pairs) right += (t == c) == (p == c);
    ovr += right / n;
  }
  o.mean_ovr_accuracy = ovr / k;
  o.f1 = o.accuracy;
  o.tpr = o.accuracy;
  o.fnr = 1 - o.accuracy;
  o.fpr = (n - agree) / (n * (k - 1));
  o.tnr = 1 - o.fpr;
  // Chance agreement: probability that two independent draws, one from the
  // truth marginal and one from the prediction marginal, agree.
  double pe = 0;
  for (int c = 0; c < k; ++c) {
    double rows = 0, cols = 0;
    for (const auto& [t, p] : pairs) {
      rows += t == c;
      cols += p == c;
    }
    pe += (rows / n) * (cols / n);
  }
  o.p_e = pe;
  o.kappa_defined = pe != 1.0;
  if (o.kappa_defined) {
    o.kappa = (o.accuracy - pe) / (1 - pe);
    o.kappa_se = std::sqrt(o.accuracy * (1 - o.accuracy) / (n * (1 - pe) * (1 - pe)));
    o.kappa_lo = std::max(-1.0, o.kappa - 1.96 * o.kappa_se);
    o.kappa_hi = std::min(1.0, o.kappa + 1.96 * o.kappa_se);
  }
  return o;
}

// Fraction of (positive, negative) pairs ranked correctly, ties count 1/2.
inline double PairwiseAuc(const std::vector<double>& scores,
                          const std::vector<bool>& positive) {
  double good = 0, total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      total += 1;
      if (scores[i] > scores[j]) good += 1;
      else if (scores[i] == scores[j]) good += 0.5;
    }
  }
  return good / total;
}

// Central-difference gradient of loss() with respect to every entry of x.
inline Tensor NumericGradient(const std::function<double()>& loss, Tensor& x,
                              double h = 1e-5) {
  Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double plus = loss();
    x[i] = saved - h;
    const double minus = loss();
    x[i] = saved;
    g[i] = (plus - minus) / (2 * h);
  }
  return g;
}

// Largest |a - n| / max(|a|, |n|, floor) over all entries.
inline double MaxRelativeError(const Tensor& analytic, const Tensor& numeric,
                               double floor = 1e-6) {
  double worst = 0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i], n = numeric[i];
    worst = std::max(worst, std::abs(a - n) /
                                std::max({std::abs(a), std::abs(n), floor}));
  }
  return worst;
}

inline double Dot(const Tensor& a, const Tensor& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ta::oracle

#endif  // TEMPORAL_AUGMENTER_TESTS_ORACLES_H_
