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

#ifndef TEMPORAL_AUGMENTER_OPTIM_H_
#define TEMPORAL_AUGMENTER_OPTIM_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "temporal_augmenter/data.h"
#include "temporal_augmenter/model.h"
#include "temporal_augmenter/rng.h"
#include "temporal_augmenter/tensor.h"

namespace ta {

struct CceResult {
  double loss = 0.0;
  Tensor d_logits;  // (probs - onehot) / n
};

// Mean categorical cross-entropy with probabilities clamped below at 1e-12,
// plus the fused softmax + cross-entropy gradient with respect to logits.
CceResult CategoricalCrossEntropy(const Tensor& probs, const Tensor& onehot);

struct RmsPropConfig {
  double lr = 1e-3;
  double rho = 0.9;
  double momentum = 0.0;
  double epsilon = 1e-7;
};

struct RmsPropState {
  Tensor accumulator;  // running mean of g^2, >= 0
  Tensor velocity;     // used only when momentum > 0
};

// s <- rho s + (1 - rho) g^2;  param <- param - lr g / (sqrt(s) + eps)
void RmsPropStep(Tensor& param, const Tensor& grad, RmsPropState& state,
                 const RmsPropConfig& config);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

struct AdamState {
  Tensor m;
  Tensor v;
  std::int64_t t = 0;
};

// Bias-corrected Adam with epsilon outside the square root.
void AdamStep(Tensor& param, const Tensor& grad, AdamState& state,
              const AdamConfig& config);

enum class OptimizerKind { kRmsProp, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  RmsPropConfig rmsprop;
  AdamConfig adam;
};

// One state slot per parameter tensor, created lazily on the first step.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config) : config_(config) {}

  void Step(std::span<Tensor* const> params, std::span<const Tensor* const> grads);
  std::size_t slot_count() const;

 private:
  OptimizerConfig config_;
  std::vector<RmsPropState> rmsprop_;
  std::vector<AdamState> adam_;
};

struct TrainConfig {
  OptimizerConfig optimizer;
  int batch_size = 32;
  int epochs = 1;
  std::uint64_t seed = 0;
  bool shuffle = true;
  // Global gradient-norm clip; 0 disables.
  double clip_norm = 0.0;

  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
};

// CSV with columns epoch,train_loss,train_acc,val_loss,val_acc.
void WriteTrainLogCsv(const std::filesystem::path& path, const TrainLog& log);
TrainLog ReadTrainLogCsv(const std::filesystem::path& path);

enum class BatchKind { kGradient, kValidation };

struct FitHooks {
  // Called for every batch with the dataset it is drawn from.
  std::function<void(BatchKind, const Dataset&, std::span<const std::size_t>)>
      on_batch;
  // Called with each batch's gradients before the optimizer step. Test use.
  std::function<void(ModelParams&)> on_gradients;
  // Called after each epoch's record is complete.
  std::function<void(const EpochRecord&)> on_epoch;
};

// Epoch loop: seeded shuffle, minibatches (last partial batch included),
// forward in train mode, backward, one optimizer step per batch. Train loss
// and accuracy are averages over the epoch's batches; validation metrics
// use eval mode. Throws DivergenceError on a non-finite batch loss.
TrainLog Fit(TemporalAugmenterModel& model, const Dataset& train,
             const Dataset& val, const TrainConfig& config, Rng& rng,
             const FitHooks* hooks = nullptr);
TrainLog Fit(TemporalAugmenterModel& model, const Dataset& train,
             const Dataset& val, const TrainConfig& config,
             const FitHooks* hooks = nullptr);

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
  Tensor probs;  // [n x k]
  std::vector<int> predictions;
};

// Eval-mode pass over a dataset in batches.
Evaluation Evaluate(const TemporalAugmenterModel& model, const Dataset& ds,
                    int batch_size = 256);

std::vector<int> Argmax(const Tensor& probs);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_OPTIM_H_
