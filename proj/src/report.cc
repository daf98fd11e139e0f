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

#include "temporal_augmenter/report.h"

#include <cstdio>
#include <iomanip>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/optim.h"

namespace ta {
namespace {

using nlohmann::json;

constexpr const char* kAucMethod =
    "one-vs-rest rank statistic (midranks) over softmax probabilities";

std::string Fixed(double v, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Pair(const Interval& i) {
  return "(" + Fixed(i.lo) + ", " + Fixed(i.hi) + ")";
}

std::string Grouped(std::size_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace

StatsReport MakeReport(std::string split, std::vector<std::string> class_names,
                       std::span<const int> truth, const Tensor& probs,
                       std::size_t total_params) {
  const int k = static_cast<int>(class_names.size());
  StatsReport r;
  r.split = std::move(split);
  r.class_names = std::move(class_names);
  r.confusion = Confusion(truth, Argmax(probs), k);
  r.classes = PerClassStats(r.confusion);
  const auto auc = AucOneVsRest(probs, truth);
  for (int c = 0; c < k; ++c) {
    r.classes[c].auc = auc[c].value;
    r.classes[c].auc_defined = auc[c].defined;
  }
  r.overall = ComputeOverallStats(r.confusion);
  r.total_params = total_params;
  return r;
}

std::string ReportToJson(const StatsReport& r) {
  const OverallStats& o = r.overall;
  json overall = {
      {"accuracy_ci95", {o.accuracy_ci95.lo, o.accuracy_ci95.hi}},
      {"accuracy", o.accuracy},
      {"mean_one_vs_rest_accuracy", o.mean_ovr_accuracy},
      {"f1_score", o.f1},
      {"false_negative_rate", o.fnr},
      {"false_positive_rate", o.fpr},
      {"true_negative_rate", o.tnr},
      {"true_positive_rate", o.tpr},
      {"kappa", o.kappa.kappa},
      {"kappa_ci95", {o.kappa.ci95.lo, o.kappa.ci95.hi}},
      {"kappa_standard_error", o.kappa.standard_error},
      {"kappa_defined", o.kappa.defined},
      {"total_params", r.total_params},
      {"trainable_params", r.total_params},
      {"non_trainable_params", 0},
  };
  json classes = json::array();
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const ClassStats& s = r.classes[c];
    classes.push_back({
        {"name", r.class_names[c]},
        {"accuracy", s.accuracy},
        {"f1_score", s.f1},
        {"auc", s.auc},
        {"auc_defined", s.auc_defined},
        {"error_rate", s.error_rate},
        {"false_negative_rate", s.fnr},
        {"false_positive_rate", s.fpr},
        {"specificity", s.specificity},
        {"sensitivity", s.sensitivity},
        {"degenerate", s.degenerate},
        {"support", s.tp + s.fn},
    });
  }
  json doc = {
      {"split", r.split},
      {"n", r.confusion.n()},
      {"class_names", r.class_names},
      {"confusion_matrix", r.confusion.counts()},
      {"auc_method", kAucMethod},
      {"overall", overall},
      {"classes", classes},
  };
  return doc.dump(2) + "\n";
}

StatsReport ReportFromJson(const std::string& text) {
  try {
    const json doc = json::parse(text);
    StatsReport r;
    r.split = doc.at("split").get<std::string>();
    r.class_names = doc.at("class_names").get<std::vector<std::string>>();
    r.confusion = ConfusionMatrix::FromCounts(
        static_cast<int>(r.class_names.size()),
        doc.at("confusion_matrix").get<std::vector<std::int64_t>>());
    r.classes = PerClassStats(r.confusion);
    const json& classes = doc.at("classes");
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
      r.classes[c].auc = classes.at(c).at("auc").get<double>();
      r.classes[c].auc_defined = classes.at(c).at("auc_defined").get<bool>();
    }
    r.overall = ComputeOverallStats(r.confusion);
    r.total_params = doc.at("overall").at("total_params").get<std::size_t>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string FormatReportTables(const StatsReport& r) {
  const OverallStats& o = r.overall;
  std::ostringstream out;
  const int label_width = 28;
  auto row = [&](const std::string& label, const std::string& value) {
    out << std::left << std::setw(label_width) << label << value << "\n";
  };
  out << "Overall statistics (" << r.split << ", n = " << r.confusion.n()
      << ")\n";
  row("Merits", "Value");
  row("95% CI", Pair(o.accuracy_ci95));
  row("Accuracy", Fixed(100.0 * o.accuracy, 3) + "%");
  row("Mean One-vs-Rest Accuracy", Fixed(100.0 * o.mean_ovr_accuracy, 3) + "%");
  row("F1 Score", Fixed(o.f1));
  row("False Negative Rate", Fixed(o.fnr));
  row("False Positive Rate", Fixed(o.fpr));
  row("True Negative Rate", Fixed(o.tnr));
  row("True Positive Rate", Fixed(o.tpr));
  row("Kappa", o.kappa.defined ? Fixed(o.kappa.kappa) : "undefined");
  row("Kappa 95% CI", o.kappa.defined ? Pair(o.kappa.ci95) : "undefined");
  row("Kappa Standard Error",
      o.kappa.defined ? Fixed(o.kappa.standard_error) : "undefined");
  row("Total params", Grouped(r.total_params));
  row("Trainable params", Grouped(r.total_params));
  row("Non-trainable params", "0");

  out << "\nStatistics per category\n";
  const int col = 12;
  out << std::left << std::setw(label_width) << "Statistical Analysis";
  for (const auto& name : r.class_names) out << std::setw(col) << name;
  out << "\n";
  auto class_row = [&](const std::string& label, auto value_of) {
    out << std::left << std::setw(label_width) << label;
    for (const ClassStats& s : r.classes) out << std::setw(col) << value_of(s);
    out << "\n";
  };
  class_row("Accuracy", [](const ClassStats& s) { return Fixed(100.0 * s.accuracy, 3) + "%"; });
  class_row("F1 Score", [](const ClassStats& s) { return Fixed(s.f1); });
  class_row("AUC", [](const ClassStats& s) {
    return s.auc_defined ? Fixed(s.auc) : std::string("undef");
  });
  class_row("Error rate", [](const ClassStats& s) { return Fixed(s.error_rate); });
  class_row("False Negative Rate", [](const ClassStats& s) { return Fixed(s.fnr); });
  class_row("False Positive Rate", [](const ClassStats& s) { return Fixed(s.fpr); });
  class_row("Specificity", [](const ClassStats& s) { return Fixed(s.specificity); });
  class_row("Sensitivity", [](const ClassStats& s) { return Fixed(s.sensitivity); });
  out << "AUC method: " << kAucMethod << "\n";
  return out.str();
}

}  // namespace ta
