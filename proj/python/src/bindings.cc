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

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "temporal_augmenter/checkpoint.h"
#include "temporal_augmenter/commands.h"
#include "temporal_augmenter/config.h"
#include "temporal_augmenter/data.h"
#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/gradcheck.h"
#include "temporal_augmenter/metrics.h"
#include "temporal_augmenter/model.h"
#include "temporal_augmenter/optim.h"
#include "temporal_augmenter/report.h"

namespace py = pybind11;

namespace ta {
namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

Tensor ToTensor(const DoubleArray& a) {
  Tensor::Shape shape(a.shape(), a.shape() + a.ndim());
  return Tensor(shape, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> ToArray(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  py::array_t<double> out(shape);
  std::copy(t.data(), t.data() + t.size(), out.mutable_data());
  return out;
}

std::vector<int> ToLabels(const IntArray& a) {
  if (a.ndim() != 1) throw DimensionError("labels must be one-dimensional");
  return std::vector<int>(a.data(), a.data() + a.size());
}

// Keys may be given with or without the "model." prefix.
ModelConfig ModelConfigFrom(const std::map<std::string, py::object>& fields) {
  ModelConfig c;
  for (const auto& [key, value] : fields) {
    const std::string full = key.rfind("model.", 0) == 0 ? key : "model." + key;
    std::string text;
    if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
      for (const auto& item : value) {
        text += (text.empty() ? "" : ",") + py::str(item).cast<std::string>();
      }
    } else {
      text = py::str(value).cast<std::string>();
    }
    SetModelConfigField(c, full, text);
  }
  return c;
}

std::map<std::string, std::string> ConfigDict(const ModelConfig& c) {
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : ModelConfigEntries(c)) out[k.substr(6)] = v;
  return out;
}

py::dict EpochDict(const EpochRecord& e) {
  py::dict d;
  d["epoch"] = e.epoch;
  d["train_loss"] = e.train_loss;
  d["train_acc"] = e.train_acc;
  d["val_loss"] = e.val_loss;
  d["val_acc"] = e.val_acc;
  return d;
}

Dataset MakeDataset(const DoubleArray& x, const IntArray& y, int num_classes) {
  if (x.ndim() != 3) throw DimensionError("features must be [n x T x d]");
  Dataset ds;
  ds.features = ToTensor(x);
  ds.labels = ToLabels(y);
  for (int c = 0; c < num_classes; ++c) ds.class_names.push_back("class_" + std::to_string(c));
  ds.Validate();
  return ds;
}

std::string ReportJson(const std::vector<int>& truth, const DoubleArray& probs,
                       std::vector<std::string> class_names, const std::string& split,
                       std::size_t total_params) {
  return ReportToJson(
      MakeReport(split, std::move(class_names), truth, ToTensor(probs), total_params));
}

}  // namespace
}  // namespace ta

PYBIND11_MODULE(_core, m) {
  using namespace ta;
  m.doc() = "Dual-stream LSTM/GRU sequence classifier";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  py::class_<TemporalAugmenterModel>(m, "Model")
      .def_static(
          "build",
          [](const std::map<std::string, py::object>& config, std::uint64_t seed) {
            return Build(ModelConfigFrom(config), seed);
          },
          py::arg("config"), py::arg("seed") = 0,
          "Builds a freshly initialized model from model.* settings.")
      .def_static("load", [](const std::filesystem::path& p) { return LoadCheckpoint(p).model; })
      .def("save", [](const TemporalAugmenterModel& self,
                      const std::filesystem::path& p) { SaveCheckpoint(p, self); })
      .def_property_readonly("config",
                             [](const TemporalAugmenterModel& self) { return ConfigDict(self.config()); })
      .def("param_count", &ParamCount)
      .def(
          "predict_proba",
          [](const TemporalAugmenterModel& self, const DoubleArray& x) {
            const Tensor input = ToTensor(x);
            Tensor probs;
            {
              py::gil_scoped_release release;
              probs = Forward(self, input, Mode::kEval, nullptr).probs;
            }
            return ToArray(probs);
          },
          py::arg("x"), "Softmax probabilities [n x k] for inputs [n x T x d].")
      .def(
          "fit",
          [](TemporalAugmenterModel& self, const DoubleArray& x, const IntArray& y,
             const DoubleArray& x_val, const IntArray& y_val, int epochs, int batch_size,
             const std::string& optimizer, double lr, std::uint64_t seed) {
            const int k = self.config().num_classes;
            const Dataset train = MakeDataset(x, y, k), val = MakeDataset(x_val, y_val, k);
            TrainConfig t;
            t.epochs = epochs;
            t.batch_size = batch_size;
            t.seed = seed;
            if (optimizer == "adam") {
              t.optimizer.kind = OptimizerKind::kAdam;
              t.optimizer.adam.lr = lr;
            } else if (optimizer == "rmsprop") {
              t.optimizer.kind = OptimizerKind::kRmsProp;
              t.optimizer.rmsprop.lr = lr;
            } else {
              throw ConfigError("optimizer must be adam|rmsprop");
            }
            TrainLog log;
            {
              py::gil_scoped_release release;
              log = Fit(self, train, val, t);
            }
            py::list out;
            for (const EpochRecord& e : log.epochs) out.append(EpochDict(e));
            return out;
          },
          py::arg("x"), py::arg("y"), py::arg("x_val"), py::arg("y_val"),
          py::arg("epochs") = 1, py::arg("batch_size") = 32, py::arg("optimizer") = "adam",
          py::arg("lr") = 1e-3, py::arg("seed") = 0,
          "Trains in place and returns one dict per epoch.");

  m.def(
      "closed_form_param_count",
      [](const std::map<std::string, py::object>& config) {
        return ClosedFormParamCount(ModelConfigFrom(config));
      },
      py::arg("config"));

  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const std::string& schema,
         const std::string& label_column, int channels) {
        CsvSchema s{ParseSchemaKind(schema), label_column, channels};
        const Dataset ds = LoadCsvSignals(path, s);
        py::array_t<int> labels(std::vector<py::ssize_t>{static_cast<py::ssize_t>(ds.size())});
        std::copy(ds.labels.begin(), ds.labels.end(), labels.mutable_data());
        return py::make_tuple(ToArray(ds.features), labels, ds.class_names);
      },
      py::arg("path"), py::arg("schema") = "generic", py::arg("label_column") = "label",
      py::arg("channels") = 1, "Returns (features [n x T x d], labels, class_names).");

  m.def(
      "confusion_matrix",
      [](const IntArray& truth, const IntArray& predicted, int k) {
        const auto t = ToLabels(truth), p = ToLabels(predicted);
        const ConfusionMatrix cm = Confusion(t, p, k);
        py::array_t<std::int64_t> out(std::vector<py::ssize_t>{k, k});
        std::copy(cm.counts().begin(), cm.counts().end(), out.mutable_data());
        return out;
      },
      py::arg("truth"), py::arg("predicted"), py::arg("k"));

  m.def(
      "cohen_kappa",
      [](double p_o, double p_e, std::int64_t n) {
        const KappaStats k = CohenKappa(p_o, p_e, n);
        py::dict d;
        d["kappa"] = k.kappa;
        d["standard_error"] = k.standard_error;
        d["ci95"] = py::make_tuple(k.ci95.lo, k.ci95.hi);
        d["defined"] = k.defined;
        return d;
      },
      py::arg("p_o"), py::arg("p_e"), py::arg("n"));

  m.def(
      "accuracy_interval",
      [](double p, std::int64_t n) {
        const Interval i = AccuracyInterval(p, n);
        return py::make_tuple(i.lo, i.hi);
      },
      py::arg("p"), py::arg("n"));

  m.def(
      "auc_one_vs_rest",
      [](const DoubleArray& scores, const IntArray& labels) {
        const auto l = ToLabels(labels);
        std::vector<std::optional<double>> out;
        for (const AucValue& a : AucOneVsRest(ToTensor(scores), l)) {
          out.push_back(a.defined ? std::optional<double>(a.value) : std::nullopt);
        }
        return out;
      },
      py::arg("scores"), py::arg("labels"), "Per-class AUC; None where undefined.");

  m.def(
      "report_json",
      [](const IntArray& truth, const DoubleArray& probs, std::vector<std::string> class_names,
         const std::string& split, std::size_t total_params) {
        return ReportJson(ToLabels(truth), probs, std::move(class_names), split, total_params);
      },
      py::arg("truth"), py::arg("probs"), py::arg("class_names"), py::arg("split") = "test",
      py::arg("total_params") = 0);

  m.def(
      "format_report",
      [](const std::string& json) { return FormatReportTables(ReportFromJson(json)); },
      py::arg("report_json"));

  m.def(
      "gradcheck",
      [](const std::string& module, std::uint64_t seed) {
        GradcheckOptions o;
        o.module = module;
        o.seed = seed;
        py::list out;
        for (const GradcheckResult& r : RunGradcheck(o)) {
          py::dict d;
          d["component"] = r.component;
          d["module"] = r.module;
          d["max_rel_error"] = r.max_rel_error;
          d["checked"] = r.checked;
          d["passed"] = r.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("module") = "all", py::arg("seed") = 0);

  m.def(
      "train_run",
      [](const std::string& config_text, std::optional<std::uint64_t> seed) {
        RunConfig config = ParseRunConfig(config_text);
        if (seed) config.seed = *seed;
        std::optional<RunOutcome> run;
        {
          py::gil_scoped_release release;
          run.emplace(TrainRun(config));
        }
        py::list log;
        for (const EpochRecord& e : run->log.epochs) log.append(EpochDict(e));
        return py::make_tuple(std::move(run->model), log, ReportToJson(run->test_report));
      },
      py::arg("config_text"), py::arg("seed") = py::none(),
      "Runs the full pipeline from config text; returns (model, log, report_json).");

  auto command = [](auto fn, const auto& cmd) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = fn(cmd, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  };
  m.def(
      "cmd_train",
      [command](const std::filesystem::path& config, const std::filesystem::path& out,
                std::optional<std::uint64_t> seed) {
        return command(CmdTrain, TrainCommand{config, seed, out});
      },
      py::arg("config"), py::arg("out"), py::arg("seed") = py::none(),
      "Same as the train subcommand; returns (exit_code, stdout, stderr).");
  m.def(
      "cmd_eval",
      [command](const std::filesystem::path& checkpoint, const std::string& split,
                std::optional<std::filesystem::path> data, const std::filesystem::path& out) {
        return command(CmdEval, EvalCommand{checkpoint, data, split, out});
      },
      py::arg("checkpoint"), py::arg("split") = "test", py::arg("data") = py::none(),
      py::arg("out") = std::filesystem::path());
  m.def(
      "cmd_report",
      [command](const std::filesystem::path& run_dir, const std::filesystem::path& out) {
        return command(CmdReport, ReportCommand{run_dir, out});
      },
      py::arg("run_dir"), py::arg("out") = std::filesystem::path());
}
