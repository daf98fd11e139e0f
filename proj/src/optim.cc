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

#include "temporal_augmenter/optim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "temporal_augmenter/checkpoint.h"
#include "temporal_augmenter/errors.h"

namespace ta {

CceResult CategoricalCrossEntropy(const Tensor& probs, const Tensor& onehot) {
  CheckSameShape(probs, onehot, "categorical cross-entropy");
  if (probs.rank() != 2 || probs.dim(0) == 0) {
    throw DimensionError("categorical cross-entropy: expected [n x k], got " +
                         probs.ShapeString());
  }
  const std::size_t n = probs.dim(0), k = probs.dim(1);
  CceResult r{0.0, Tensor(probs.shape())};
  for (std::size_t i = 0; i < n; ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double y = onehot.at(i, j);
      if (y == 1.0) {
        ++ones;
        r.loss -= std::log(std::max(probs.at(i, j), 1e-12));
      } else if (y != 0.0) {
        ones = -1;
        break;
      }
      r.d_logits.at(i, j) = (probs.at(i, j) - y) / static_cast<double>(n);
    }
    if (ones != 1) {
      throw std::invalid_argument("categorical cross-entropy: target row " +
                                  std::to_string(i) + " is not one-hot");
    }
  }
  r.loss /= static_cast<double>(n);
  return r;
}

void RmsPropStep(Tensor& param, const Tensor& grad, RmsPropState& state,
                 const RmsPropConfig& c) {
  CheckSameShape(param, grad, "rmsprop");
  if (state.accumulator.shape() != param.shape()) {
    state.accumulator = Tensor::Zeros(param.shape());
  }
  if (c.momentum != 0.0 && state.velocity.shape() != param.shape()) {
    state.velocity = Tensor::Zeros(param.shape());
  }
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    double& s = state.accumulator[i];
    s = c.rho * s + (1.0 - c.rho) * g * g;
    const double step = c.lr * g / (std::sqrt(s) + c.epsilon);
    if (c.momentum != 0.0) {
      double& v = state.velocity[i];
      v = c.momentum * v - step;
      param[i] += v;
    } else {
      param[i] -= step;
    }
  }
}

void AdamStep(Tensor& param, const Tensor& grad, AdamState& state,
              const AdamConfig& c) {
  CheckSameShape(param, grad, "adam");
  if (state.m.shape() != param.shape()) {
    state.m = Tensor::Zeros(param.shape());
    state.v = Tensor::Zeros(param.shape());
    state.t = 0;
  }
  ++state.t;
  const double correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    double& m = state.m[i];
    double& v = state.v[i];
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    param[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

void Optimizer::Step(std::span<Tensor* const> params,
                     std::span<const Tensor* const> grads) {
  if (params.size() != grads.size()) {
    throw DimensionError("optimizer: " + std::to_string(params.size()) +
                         " parameters but " + std::to_string(grads.size()) +
                         " gradients");
  }
  if (config_.kind == OptimizerKind::kRmsProp) {
    rmsprop_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      RmsPropStep(*params[i], *grads[i], rmsprop_[i], config_.rmsprop);
    }
  } else {
    adam_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      AdamStep(*params[i], *grads[i], adam_[i], config_.adam);
    }
  }
}

std::size_t Optimizer::slot_count() const {
  return config_.kind == OptimizerKind::kRmsProp ? rmsprop_.size()
                                                 : adam_.size();
}

void TrainConfig::Validate() const {
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (clip_norm < 0.0) throw ConfigError("train: clip_norm must be >= 0");
}

void WriteTrainLogCsv(const std::filesystem::path& path, const TrainLog& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "epoch,train_loss,train_acc,val_loss,val_acc\n";
  for (const EpochRecord& e : log.epochs) {
    out << e.epoch << ',' << FormatDouble(e.train_loss) << ','
        << FormatDouble(e.train_acc) << ',' << FormatDouble(e.val_loss) << ','
        << FormatDouble(e.val_acc) << '\n';
  }
}

TrainLog ReadTrainLogCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("epoch,train_loss,train_acc,val_loss,val_acc", 0) != 0) {
    throw DataError(path.string() + ": unexpected header '" + line + "'");
  }
  TrainLog log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpochRecord e;
    char sep;
    std::istringstream row(line);
    if (!(row >> e.epoch >> sep >> e.train_loss >> sep >> e.train_acc >> sep >>
          e.val_loss >> sep >> e.val_acc)) {
      throw DataError(path.string() + ": malformed row '" + line + "'");
    }
    log.epochs.push_back(e);
  }
  return log;
}

std::vector<int> Argmax(const Tensor& probs) {
  const std::size_t n = probs.dim(0), k = probs.dim(1);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = probs.data() + i * k;
    out[i] = static_cast<int>(std::max_element(row, row + k) - row);
  }
  return out;
}

namespace {

void CheckCompatible(const TemporalAugmenterModel& model, const Dataset& ds,
                     const char* which) {
  ds.Validate();
  const ModelConfig& c = model.config();
  if (ds.num_classes() != c.num_classes) {
    throw ConfigError(std::string(which) + " data has " +
                      std::to_string(ds.num_classes()) +
                      " classes but the model has " +
                      std::to_string(c.num_classes));
  }
  if (ds.timesteps() != static_cast<std::size_t>(c.input_timesteps) ||
      ds.channels() != static_cast<std::size_t>(c.input_channels)) {
    throw DimensionError(std::string(which) + " features " +
                         ds.features.ShapeString() +
                         " do not match the model input");
  }
}

void ClipGlobalNorm(std::span<Tensor* const> grads, double max_norm) {
  double sq = 0.0;
  for (const Tensor* g : grads) {
    for (double v : g->values()) sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  const double scale = max_norm / norm;
  for (Tensor* g : grads) {
    for (double& v : g->values()) v *= scale;
  }
}

}  // namespace

Evaluation Evaluate(const TemporalAugmenterModel& model, const Dataset& ds,
                    int batch_size) {
  CheckCompatible(model, ds, "evaluation");
  const std::size_t n = ds.size();
  const std::size_t k = model.config().num_classes;
  Evaluation ev;
  ev.probs = Tensor({n, k});
  std::vector<std::size_t> rows;
  double loss_sum = 0.0;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    const Tensor x = GatherRows(ds.features, rows);
    ForwardResult fr = Forward(model, x, Mode::kEval, nullptr);
    std::copy_n(fr.probs.data(), fr.probs.size(), ev.probs.data() + start * k);
    const std::span<const int> labels(ds.labels.data() + start, end - start);
    loss_sum += CategoricalCrossEntropy(fr.probs, OneHot(labels, k)).loss *
                static_cast<double>(end - start);
  }
  ev.predictions = Argmax(ev.probs);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += ev.predictions[i] == ds.labels[i];
  ev.loss = loss_sum / static_cast<double>(n);
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return ev;
}

TrainLog Fit(TemporalAugmenterModel& model, const Dataset& train,
             const Dataset& val, const TrainConfig& config, Rng& rng,
             const FitHooks* hooks) {
  config.Validate();
  CheckCompatible(model, train, "training");
  CheckCompatible(model, val, "validation");
  const std::size_t n = train.size();
  const int k = model.config().num_classes;
  Optimizer optimizer(config.optimizer);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainLog log;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) rng.Shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    int batch_index = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(n, start + config.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      if (hooks && hooks->on_batch) hooks->on_batch(BatchKind::kGradient, train, rows);

      std::vector<int> labels;
      labels.reserve(rows.size());
      for (std::size_t r : rows) labels.push_back(train.labels[r]);
      const Tensor x = GatherRows(train.features, rows);
      ForwardTrace trace;
      ForwardResult fr = Forward(model, x, Mode::kTrain, &rng, &trace);
      CceResult loss = CategoricalCrossEntropy(fr.probs, OneHot(labels, k));
      if (!std::isfinite(loss.loss)) {
        throw DivergenceError(epoch, batch_index + 1,
                              "training diverged: non-finite loss at epoch " +
                                  std::to_string(epoch) + ", batch " +
                                  std::to_string(batch_index + 1));
      }
      ModelParams grads = Backward(model, trace, loss.d_logits);
      if (hooks && hooks->on_gradients) hooks->on_gradients(grads);

      std::vector<Tensor*> param_ptrs, grad_ptrs;
      for (auto& [name, t] : NamedTensors(model.mutable_params())) param_ptrs.push_back(t);
      for (auto& [name, t] : NamedTensors(grads)) grad_ptrs.push_back(t);
      if (config.clip_norm > 0.0) ClipGlobalNorm(grad_ptrs, config.clip_norm);
      std::vector<const Tensor*> const_grads(grad_ptrs.begin(), grad_ptrs.end());
      optimizer.Step(param_ptrs, const_grads);

      loss_sum += loss.loss * static_cast<double>(rows.size());
      const std::vector<int> predicted = Argmax(fr.probs);
      for (std::size_t i = 0; i < rows.size(); ++i) correct += predicted[i] == labels[i];
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(n);
    record.train_acc = static_cast<double>(correct) / static_cast<double>(n);
    if (hooks && hooks->on_batch) {
      std::vector<std::size_t> all(val.size());
      std::iota(all.begin(), all.end(), 0);
      hooks->on_batch(BatchKind::kValidation, val, all);
    }
    const Evaluation ev = Evaluate(model, val);
    record.val_loss = ev.loss;
    record.val_acc = ev.accuracy;
    log.epochs.push_back(record);
    if (hooks && hooks->on_epoch) hooks->on_epoch(record);
  }
  return log;
}

TrainLog Fit(TemporalAugmenterModel& model, const Dataset& train,
             const Dataset& val, const TrainConfig& config,
             const FitHooks* hooks) {
  Rng rng(config.seed);
  return Fit(model, train, val, config, rng, hooks);
}

}  // namespace ta
