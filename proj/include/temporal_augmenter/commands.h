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

#ifndef TEMPORAL_AUGMENTER_COMMANDS_H_
#define TEMPORAL_AUGMENTER_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "temporal_augmenter/config.h"
#include "temporal_augmenter/data.h"
#include "temporal_augmenter/model.h"
#include "temporal_augmenter/optim.h"
#include "temporal_augmenter/report.h"

namespace ta {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,      // bad config, flags, or checkpoint/data mismatch
  kExitData = 3,        // missing or malformed data and run artifacts
  kExitDivergence = 4,  // non-finite training loss
  kExitGradcheck = 5,   // a gradient check exceeded tolerance
};

// Loads every configured file (csv rows are concatenated) or the wav root.
Dataset LoadRunData(const DataConfig& data);

struct PreparedSplits {
  SplitResult split;
  std::optional<ScalerParams> scaler;
};

// Optional stratified subsample, seeded split, then standardization. The
// scaler is fitted on the train partition unless one is supplied.
PreparedSplits PrepareSplits(const RunConfig& config, const Dataset& data,
                             const ScalerParams* fitted = nullptr);

// The configured model with shape fields taken from the data. Explicit
// model.input_* or model.num_classes overrides that disagree with the data
// raise ConfigError.
ModelConfig ResolveModelConfig(const RunConfig& config, const Dataset& data);

struct RunOutcome {
  TemporalAugmenterModel model;
  TrainLog log;
  PreparedSplits data;
  StatsReport test_report;
};

// The whole training pipeline in memory. Progress lines go to progress when
// it is non-null.
RunOutcome TrainRun(const RunConfig& config, std::ostream* progress = nullptr);

struct TrainCommand {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
};

// Writes checkpoint.tam, train_log.csv, config.txt, report_test.json and
// report_test.txt under out.
int CmdTrain(const TrainCommand& cmd, std::ostream& out, std::ostream& err);

struct EvalCommand {
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> data;  // replaces data.path
  std::string split = "test";                 // train | val | test
  std::filesystem::path out;                  // default: checkpoint dir
};

// Rebuilds the checkpoint's split and writes report_<split>.json/.txt.
int CmdEval(const EvalCommand& cmd, std::ostream& out, std::ostream& err);

struct GradcheckCommand {
  std::string module = "all";
  std::uint64_t seed = 0;
  std::string corrupt;  // test hook, see GradcheckOptions
};

int CmdGradcheck(const GradcheckCommand& cmd, std::ostream& out,
                 std::ostream& err);

struct ReportCommand {
  std::filesystem::path run_dir;
  std::filesystem::path out;  // default: run_dir
};

// Writes curves.csv and summary.txt from a run directory.
int CmdReport(const ReportCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_COMMANDS_H_
