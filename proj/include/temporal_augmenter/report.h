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

#ifndef TEMPORAL_AUGMENTER_REPORT_H_
#define TEMPORAL_AUGMENTER_REPORT_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "temporal_augmenter/metrics.h"
#include "temporal_augmenter/tensor.h"

namespace ta {

// Everything shown in the overall and per-class statistics tables.
struct StatsReport {
  std::string split;  // "test", "val", ...
  std::vector<std::string> class_names;
  ConfusionMatrix confusion{2};
  std::vector<ClassStats> classes;
  OverallStats overall;
  std::size_t total_params = 0;
};

StatsReport MakeReport(std::string split, std::vector<std::string> class_names,
                       std::span<const int> truth, const Tensor& probs,
                       std::size_t total_params);

// Structured document with one stable key per table row. Keys:
//   split, n, class_names, confusion_matrix, auc_method,
//   overall.{accuracy_ci95, accuracy, mean_one_vs_rest_accuracy, f1_score,
//            false_negative_rate, false_positive_rate, true_negative_rate,
//            true_positive_rate, kappa, kappa_ci95, kappa_standard_error,
//            kappa_defined, total_params, trainable_params,
//            non_trainable_params}
//   classes[].{name, accuracy, f1_score, auc, auc_defined, error_rate,
//              false_negative_rate, false_positive_rate, specificity,
//              sensitivity, degenerate, support}
std::string ReportToJson(const StatsReport& report);

// Reads back a document written by ReportToJson; throws DataError.
StatsReport ReportFromJson(const std::string& text);

// Plain-text tables: an overall Merits/Value table followed by a per-class
// table.
std::string FormatReportTables(const StatsReport& report);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_REPORT_H_
