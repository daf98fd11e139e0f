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

#include "temporal_augmenter/commands.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "temporal_augmenter/checkpoint.h"
#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/gradcheck.h"
#include "temporal_augmenter/rng.h"
#include "parse_util.h"

namespace ta {
namespace fs = std::filesystem;
namespace {

constexpr const char* kCheckpointFile = "checkpoint.tam";
constexpr const char* kTrainLogFile = "train_log.csv";
constexpr const char* kRunPrefix = "run.";

Dataset Concatenate(std::vector<Dataset> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  const Dataset& first = parts.front();
  std::size_t n = 0;
  for (const Dataset& p : parts) {
    if (p.class_names != first.class_names ||
        p.features.dim(1) != first.features.dim(1) ||
        p.features.dim(2) != first.features.dim(2)) {
      throw DataError("data files disagree on shape or classes");
    }
    n += p.size();
  }
  Dataset out;
  out.class_names = first.class_names;
  out.metadata = first.metadata;
  out.features = Tensor({n, first.features.dim(1), first.features.dim(2)});
  double* dst = out.features.data();
  for (const Dataset& p : parts) {
    dst = std::copy(p.features.values().begin(), p.features.values().end(), dst);
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
  }
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string JoinNames(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  return out;
}

void WriteReport(const fs::path& dir, const StatsReport& report) {
  WriteText(dir / ("report_" + report.split + ".json"), ReportToJson(report));
  WriteText(dir / ("report_" + report.split + ".txt"),
            FormatReportTables(report));
}

const Dataset& PickSplit(const SplitResult& s, const std::string& name) {
  if (name == "train") return s.train;
  if (name == "val") return s.val;
  return s.test;
}

StatsReport ReportFor(const TemporalAugmenterModel& model, const Dataset& ds,
                      const std::string& split) {
  const Evaluation ev = Evaluate(model, ds);
  return MakeReport(split, ds.class_names, ds.labels, ev.probs,
                    ParamCount(model));
}

template <typename Fn>
int Guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

Dataset LoadRunData(const DataConfig& data) {
  const auto paths = data.ResolvedPaths();
  for (const fs::path& p : paths) {
    if (!fs::exists(p)) throw DataError("data path not found: " + p.string());
  }
  if (data.kind == DataKind::kWav) {
    if (paths.size() != 1) throw ConfigError("wav data takes one directory");
    return LoadWavDir(paths.front(), data.wav);
  }
  std::vector<Dataset> parts;
  for (const fs::path& p : paths) parts.push_back(LoadCsvSignals(p, data.schema));
  Dataset ds = Concatenate(std::move(parts));
  ds.Validate();
  return ds;
}

PreparedSplits PrepareSplits(const RunConfig& config, const Dataset& data,
                             const ScalerParams* fitted) {
  const RunSeeds seeds = DeriveSeeds(config.seed);
  const Dataset* source = &data;
  Dataset sampled;
  if (config.data.max_rows > 0 && config.data.max_rows < data.size()) {
    const auto rows = StratifiedSample(data, config.data.max_rows, seeds.subsample);
    sampled = Subset(data, rows);
    source = &sampled;
  }
  SplitSpec spec = config.split;
  spec.seed = seeds.split;
  PreparedSplits out{Split(*source, spec), std::nullopt};
  if (fitted) {
    out.scaler = *fitted;
  } else if (config.data.standardize) {
    out.scaler = FitScaler(out.split.train);
  }
  if (out.scaler) {
    out.split.train = ApplyScaler(*out.scaler, out.split.train);
    out.split.val = ApplyScaler(*out.scaler, out.split.val);
    out.split.test = ApplyScaler(*out.scaler, out.split.test);
  }
  return out;
}

ModelConfig ResolveModelConfig(const RunConfig& config, const Dataset& data) {
  ModelConfig m = config.model;
  const std::map<std::string, int> derived = {
      {"model.input_timesteps", static_cast<int>(data.timesteps())},
      {"model.input_channels", static_cast<int>(data.channels())},
      {"model.num_classes", data.num_classes()},
  };
  for (const auto& [key, value] : config.overrides) {
    const auto it = derived.find(key);
    if (it != derived.end() && internal::ParseInt(key, value) != it->second) {
      throw ConfigError(key + " = " + value + " but the data gives " +
                        std::to_string(it->second));
    }
  }
  m.input_timesteps = derived.at("model.input_timesteps");
  m.input_channels = derived.at("model.input_channels");
  m.num_classes = derived.at("model.num_classes");
  m.Validate();
  return m;
}

RunOutcome TrainRun(const RunConfig& config, std::ostream* progress) {
  config.Validate();
  const Dataset data = LoadRunData(config.data);
  PreparedSplits prepared = PrepareSplits(config, data);
  const SplitResult& s = prepared.split;
  const ModelConfig model_config = ResolveModelConfig(config, data);
  const RunSeeds seeds = DeriveSeeds(config.seed);
  TemporalAugmenterModel model = Build(model_config, seeds.init);
  if (progress) {
    *progress << "data: " << data.size() << " rows, " << data.num_classes()
              << " classes, shape [" << data.timesteps() << " x "
              << data.channels() << "]; split " << s.train.size() << "/"
              << s.val.size() << "/" << s.test.size() << "; params "
              << ParamCount(model) << "\n";
  }
  TrainConfig train = config.train;
  train.seed = seeds.train;
  FitHooks hooks;
  if (progress) {
    hooks.on_epoch = [&](const EpochRecord& r) {
      char line[160];
      std::snprintf(line, sizeof line,
                    "epoch %d/%d  loss %.4f  acc %.4f  val_loss %.4f  "
                    "val_acc %.4f\n",
                    r.epoch, train.epochs, r.train_loss, r.train_acc,
                    r.val_loss, r.val_acc);
      *progress << line << std::flush;
    };
  }
  TrainLog log = Fit(model, s.train, s.val, train, &hooks);
  StatsReport report = ReportFor(model, s.test, "test");
  return {std::move(model), std::move(log), std::move(prepared),
          std::move(report)};
}

int CmdTrain(const TrainCommand& cmd, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    RunConfig config = LoadRunConfig(cmd.config);
    if (cmd.seed) config.seed = *cmd.seed;
    if (cmd.out.empty()) throw ConfigError("--out is required");
    RunOutcome run = TrainRun(config, &out);
    fs::create_directories(cmd.out);

    std::map<std::string, std::string> metadata;
    for (const auto& [k, v] : RunConfigEntries(config)) {
      metadata[kRunPrefix + k] = v;
    }
    for (const auto& [k, v] : config.overrides) {
      metadata["override." + k] = v;
    }
    metadata["data.class_names"] = JoinNames(run.test_report.class_names);
    metadata["split.sizes"] = std::to_string(run.data.split.train.size()) + "," +
                              std::to_string(run.data.split.val.size()) + "," +
                              std::to_string(run.data.split.test.size());
    std::map<std::string, Tensor> extras;
    if (run.data.scaler) {
      extras["scaler.mean"] = run.data.scaler->mean;
      extras["scaler.std"] = run.data.scaler->std;
    }
    SaveCheckpoint(cmd.out / kCheckpointFile, run.model, metadata, extras);
    WriteTrainLogCsv(cmd.out / kTrainLogFile, run.log);
    WriteText(cmd.out / "config.txt", FormatRunConfig(config));
    WriteReport(cmd.out, run.test_report);

    const OverallStats& o = run.test_report.overall;
    char line[128];
    std::snprintf(line, sizeof line, "test accuracy %.5f  kappa %.5f\n",
                  o.accuracy, o.kappa.kappa);
    out << line << "wrote " << cmd.out.string() << "\n";
    return kExitOk;
  });
}

int CmdEval(const EvalCommand& cmd, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    if (cmd.split != "train" && cmd.split != "val" && cmd.split != "test") {
      throw ConfigError("--split must be train|val|test, got '" + cmd.split + "'");
    }
    Checkpoint ckpt = LoadCheckpoint(cmd.checkpoint);

    const auto preset_it = ckpt.metadata.find("run.preset");
    if (preset_it == ckpt.metadata.end()) {
      throw DataError(cmd.checkpoint.string() + " has no run configuration");
    }
    RunConfig config = PresetConfig(ParsePreset(preset_it->second));
    for (const auto& [k, v] : ckpt.metadata) {
      if (k.rfind(kRunPrefix, 0) == 0 && k != "run.preset") {
        ApplyConfigKey(config, k.substr(std::string(kRunPrefix).size()), v);
      }
    }
    if (cmd.data) {
      config.data.paths = {*cmd.data};
      config.data.root.clear();
    }

    const Dataset data = LoadRunData(config.data);
    const ModelConfig& mc = ckpt.model.config();
    if (data.num_classes() != mc.num_classes ||
        static_cast<int>(data.timesteps()) != mc.input_timesteps ||
        static_cast<int>(data.channels()) != mc.input_channels) {
      throw ConfigError(
          "data does not match the checkpoint: " +
          std::to_string(data.num_classes()) + " classes, shape [" +
          std::to_string(data.timesteps()) + " x " +
          std::to_string(data.channels()) + "] vs " +
          std::to_string(mc.num_classes) + " classes, shape [" +
          std::to_string(mc.input_timesteps) + " x " +
          std::to_string(mc.input_channels) + "]");
    }
    const auto names_it = ckpt.metadata.find("data.class_names");
    if (names_it != ckpt.metadata.end() &&
        names_it->second != JoinNames(data.class_names)) {
      throw ConfigError("class names differ from the checkpoint: " +
                        JoinNames(data.class_names) + " vs " + names_it->second);
    }

    std::optional<ScalerParams> scaler;
    if (ckpt.extras.count("scaler.mean") && ckpt.extras.count("scaler.std")) {
      scaler = ScalerParams{ckpt.extras.at("scaler.mean"),
                            ckpt.extras.at("scaler.std")};
    }
    RunConfig split_config = config;
    split_config.data.standardize = scaler.has_value();
    const PreparedSplits prepared =
        PrepareSplits(split_config, data, scaler ? &*scaler : nullptr);
    const Dataset& part = PickSplit(prepared.split, cmd.split);
    const StatsReport report = ReportFor(ckpt.model, part, cmd.split);

    const fs::path dir =
        cmd.out.empty() ? cmd.checkpoint.parent_path() : cmd.out;
    if (!dir.empty()) fs::create_directories(dir);
    WriteReport(dir.empty() ? fs::path(".") : dir, report);
    out << FormatReportTables(report);
    return kExitOk;
  });
}

int CmdGradcheck(const GradcheckCommand& cmd, std::ostream& out,
                 std::ostream& err) {
  return Guarded(err, [&] {
    GradcheckOptions options;
    options.module = cmd.module;
    options.seed = cmd.seed;
    options.corrupt = cmd.corrupt;
    const auto results = RunGradcheck(options);
    bool ok = true;
    for (const GradcheckResult& r : results) {
      char line[160];
      std::snprintf(line, sizeof line, "%-20s max_rel_err %.3e  (%zu values)  %s\n",
                    r.component.c_str(), r.max_rel_error, r.checked,
                    r.passed ? "ok" : "FAIL");
      out << line;
      if (!r.passed) {
        err << "gradcheck failed: " << r.component << "\n";
        ok = false;
      }
    }
    return ok ? kExitOk : kExitGradcheck;
  });
}

int CmdReport(const ReportCommand& cmd, std::ostream& out, std::ostream& err) {
  return Guarded(err, [&] {
    const fs::path log_path = cmd.run_dir / kTrainLogFile;
    if (!fs::is_regular_file(log_path)) {
      throw DataError("missing " + log_path.string());
    }
    const TrainLog log = ReadTrainLogCsv(log_path);

    std::vector<fs::path> reports;
    if (fs::is_directory(cmd.run_dir)) {
      for (const auto& entry : fs::directory_iterator(cmd.run_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("report_", 0) == 0 && entry.path().extension() == ".json") {
          reports.push_back(entry.path());
        }
      }
    }
    if (reports.empty()) {
      throw DataError("no report_*.json in " + cmd.run_dir.string());
    }
    std::sort(reports.begin(), reports.end());

    const fs::path dir = cmd.out.empty() ? cmd.run_dir : cmd.out;
    fs::create_directories(dir);

    std::ostringstream curves;
    curves << "epoch,train_accuracy,val_accuracy,train_loss,val_loss\n";
    for (const EpochRecord& e : log.epochs) {
      curves << e.epoch << "," << FormatDouble(e.train_acc) << ","
             << FormatDouble(e.val_acc) << "," << FormatDouble(e.train_loss)
             << "," << FormatDouble(e.val_loss) << "\n";
    }
    WriteText(dir / "curves.csv", curves.str());

    std::ostringstream summary;
    summary << "epochs: " << log.epochs.size() << "\n";
    if (!log.epochs.empty()) {
      const EpochRecord& last = log.epochs.back();
      char line[160];
      std::snprintf(line, sizeof line,
                    "final epoch: train_acc %.5f  val_acc %.5f  train_loss "
                    "%.5f  val_loss %.5f\n",
                    last.train_acc, last.val_acc, last.train_loss,
                    last.val_loss);
      summary << line;
    }
    for (const fs::path& p : reports) {
      summary << "\n" << FormatReportTables(ReportFromJson(ReadText(p)));
    }
    WriteText(dir / "summary.txt", summary.str());
    out << summary.str();
    return kExitOk;
  });
}

}  // namespace ta
