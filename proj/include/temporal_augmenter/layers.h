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

#ifndef TEMPORAL_AUGMENTER_LAYERS_H_
#define TEMPORAL_AUGMENTER_LAYERS_H_

#include <cstdint>
#include <vector>

#include "temporal_augmenter/rng.h"
#include "temporal_augmenter/tensor.h"

// Feed-forward layers as forward/backward function pairs. A forward call
// optionally fills a cache; the matching backward consumes it and returns
// dL/dinput while *accumulating* parameter gradients into the caller's
// gradient struct (which has the same shapes as the parameters).

namespace ta {

enum class Mode { kTrain, kEval };

enum class Activation { kRelu, kIdentity };

struct DenseParams {
  Tensor weight;  // [in x out]
  Tensor bias;    // [out]

  std::size_t in() const { return weight.dim(0); }
  std::size_t out() const { return weight.dim(1); }
};

struct Conv1DParams {
  Tensor kernel;  // [kernel_size x in_channels x filters]
  Tensor bias;    // [filters]

  std::size_t kernel_size() const { return kernel.dim(0); }
  std::size_t in_channels() const { return kernel.dim(1); }
  std::size_t filters() const { return kernel.dim(2); }
};

DenseParams ZerosLike(const DenseParams& p);
Conv1DParams ZerosLike(const Conv1DParams& p);

struct DenseCache {
  Tensor input;
};

// y = x W + b for x of shape [n x in].
Tensor DenseForward(const Tensor& x, const DenseParams& p,
                    DenseCache* cache = nullptr);
Tensor DenseBackward(const Tensor& dy, const DenseParams& p,
                     const DenseCache& cache, DenseParams& grads);

struct Conv1DCache {
  Tensor input;
};

// Valid padding, stride 1: x [n x T x C] -> y [n x (T - k + 1) x F].
Tensor Conv1DForward(const Tensor& x, const Conv1DParams& p,
                     Conv1DCache* cache = nullptr);
Tensor Conv1DBackward(const Tensor& dy, const Conv1DParams& p,
                      const Conv1DCache& cache, Conv1DParams& grads);

struct MaxPoolCache {
  Tensor::Shape input_shape;
  std::vector<std::uint32_t> argmax;  // flat input index per output value
};

// Non-overlapping windows (stride = pool) over the time axis of [n x T x c];
// trailing timesteps that do not fill a window are dropped. Ties resolve to
// the first index.
Tensor MaxPool1DForward(const Tensor& x, int pool,
                        MaxPoolCache* cache = nullptr);
Tensor MaxPool1DBackward(const Tensor& dy, const MaxPoolCache& cache);

struct DropoutCache {
  // Per-element multiplier (0 or 1/(1-rate)); empty when the layer acted as
  // the identity.
  Tensor mask;
};

// Inverted dropout. Eval mode and rate 0 are the identity and draw nothing
// from the generator.
Tensor DropoutForward(const Tensor& x, double rate, Mode mode, Rng* rng,
                      DropoutCache* cache = nullptr);
Tensor DropoutBackward(const Tensor& dy, const DropoutCache& cache);

struct ActivationCache {
  Tensor input;
};

// ReLU uses the subgradient 0 at x == 0.
Tensor ActivationForward(const Tensor& x, Activation act,
                         ActivationCache* cache = nullptr);
Tensor ActivationBackward(const Tensor& dy, Activation act,
                          const ActivationCache& cache);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_LAYERS_H_
