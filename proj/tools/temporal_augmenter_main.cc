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

// Command-line entry point: train, eval, gradcheck, report.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "temporal_augmenter/commands.h"
#include "temporal_augmenter/config.h"

int main(int argc, char** argv) {
  CLI::App app{"Dual-stream LSTM/GRU time-series classifier"};
  app.require_subcommand(1);
  app.footer(std::string("Relative data paths resolve against $") +
             ta::kDataRootEnv +
             " when set.\nExit codes: 0 ok, 1 internal error, 2 config, "
             "3 data, 4 divergence, 5 gradcheck failure.");

  ta::TrainCommand train;
  std::uint64_t train_seed = 0;
  auto* train_cmd = app.add_subcommand("train", "Train a model from a config file");
  train_cmd->add_option("--config", train.config, "Run config (key = value)")
      ->required();
  auto* seed_opt =
      train_cmd->add_option("--seed", train_seed, "Overrides the config seed");
  train_cmd->add_option("--out", train.out, "Output directory")->required();

  ta::EvalCommand eval;
  std::string eval_data;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on one split");
  eval_cmd->add_option("checkpoint", eval.checkpoint, "checkpoint.tam")
      ->required();
  auto* data_opt =
      eval_cmd->add_option("--data", eval_data, "Data file or directory");
  eval_cmd->add_option("--split", eval.split, "train | val | test")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval.out,
                       "Output directory (default: the checkpoint's)");

  ta::GradcheckCommand grad;
  auto* grad_cmd =
      app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  grad_cmd->add_option("--module", grad.module,
                       "all | dense | conv1d | maxpool | dropout | relu | "
                       "lstm | gru | model | cce")
      ->capture_default_str();
  grad_cmd->add_option("--seed", grad.seed)->capture_default_str();
  grad_cmd->add_option("--corrupt", grad.corrupt)->group("");

  ta::ReportCommand report;
  auto* report_cmd =
      app.add_subcommand("report", "Curves and summary tables for a run");
  report_cmd->add_option("run_dir", report.run_dir)->required();
  report_cmd->add_option("--out", report.out,
                         "Output directory (default: run_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ta::kExitConfig;
  }

  if (*train_cmd) {
    if (*seed_opt) train.seed = train_seed;
    return ta::CmdTrain(train, std::cout, std::cerr);
  }
  if (*eval_cmd) {
    if (*data_opt) eval.data = eval_data;
    return ta::CmdEval(eval, std::cout, std::cerr);
  }
  if (*grad_cmd) return ta::CmdGradcheck(grad, std::cout, std::cerr);
  return ta::CmdReport(report, std::cout, std::cerr);
}
