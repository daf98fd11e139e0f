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

#ifndef TEMPORAL_AUGMENTER_GRADCHECK_H_
#define TEMPORAL_AUGMENTER_GRADCHECK_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ta {

inline constexpr double kGradcheckTolerance = 1e-4;

struct GradcheckOptions {
  std::uint64_t seed = 0;
  // One of GradcheckModules(), or "all".
  std::string module = "all";
  // Test hook: analytic gradients of every component whose module matches
  // this name are perturbed before comparison.
  std::string corrupt;
  double step = 1e-5;
};

struct GradcheckResult {
  std::string component;  // e.g. "lstm[T=5]"
  std::string module;     // e.g. "lstm"
  double max_rel_error = 0.0;
  std::size_t checked = 0;  // scalar entries compared
  bool passed = false;
};

// dense, conv1d, maxpool, dropout, relu, lstm, gru, model, cce
std::vector<std::string> GradcheckModules();

// |a - n| / max(|a|, |n|, 1e-6)
double RelativeError(double analytic, double numeric);

// Central differences against the analytic backward pass of each selected
// component. Throws ConfigError for an unknown module name.
std::vector<GradcheckResult> RunGradcheck(const GradcheckOptions& options);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_GRADCHECK_H_
