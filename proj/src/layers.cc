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

#include "temporal_augmenter/layers.h"

#include <stdexcept>
#include <string>

#include "temporal_augmenter/errors.h"

namespace ta {

DenseParams ZerosLike(const DenseParams& p) {
  return {Tensor::Zeros(p.weight.shape()), Tensor::Zeros(p.bias.shape())};
}

Conv1DParams ZerosLike(const Conv1DParams& p) {
  return {Tensor::Zeros(p.kernel.shape()), Tensor::Zeros(p.bias.shape())};
}

Tensor DenseForward(const Tensor& x, const DenseParams& p, DenseCache* cache) {
  if (x.rank() != 2 || x.dim(1) != p.in()) {
    throw DimensionError("dense: input " + x.ShapeString() +
                         " does not match weight " + p.weight.ShapeString());
  }
  const std::size_t n = x.dim(0);
  Tensor y({n, p.out()});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p.out(); ++j) y.at(i, j) = p.bias[j];
  }
  kernels::GemmNN(n, p.out(), p.in(), x.data(), p.weight.data(), y.data());
  if (cache) cache->input = x;
  return y;
}

Tensor DenseBackward(const Tensor& dy, const DenseParams& p,
                     const DenseCache& cache, DenseParams& grads) {
  const Tensor& x = cache.input;
  if (dy.rank() != 2 || dy.dim(0) != x.dim(0) || dy.dim(1) != p.out()) {
    throw DimensionError("dense backward: gradient " + dy.ShapeString() +
                         " does not match output [" +
                         std::to_string(x.dim(0)) + "x" +
                         std::to_string(p.out()) + "]");
  }
  const std::size_t n = x.dim(0);
  kernels::GemmTN(p.in(), p.out(), n, x.data(), dy.data(), grads.weight.data());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p.out(); ++j) grads.bias[j] += dy.at(i, j);
  }
  Tensor dx({n, p.in()});
  kernels::GemmNT(n, p.in(), p.out(), dy.data(), p.weight.data(), dx.data());
  return dx;
}

Tensor Conv1DForward(const Tensor& x, const Conv1DParams& p,
                     Conv1DCache* cache) {
  if (x.rank() != 3 || x.dim(2) != p.in_channels()) {
    throw DimensionError("conv1d: input " + x.ShapeString() +
                         " does not match kernel " + p.kernel.ShapeString());
  }
  const std::size_t n = x.dim(0), steps = x.dim(1), channels = x.dim(2);
  const std::size_t k = p.kernel_size(), filters = p.filters();
  if (steps < k) {
    throw DimensionError("conv1d: sequence length " + std::to_string(steps) +
                         " is shorter than kernel size " + std::to_string(k));
  }
  const std::size_t out_steps = steps - k + 1;
  Tensor y({n, out_steps, filters});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < out_steps; ++t) {
      double* y_row = &y.at(i, t, 0);
      for (std::size_t f = 0; f < filters; ++f) y_row[f] = p.bias[f];
      for (std::size_t j = 0; j < k; ++j) {
        kernels::GemmNN(1, filters, channels, &x.at(i, t + j, 0),
                        p.kernel.data() + j * channels * filters, y_row);
      }
    }
  }
  if (cache) cache->input = x;
  return y;
}

Tensor Conv1DBackward(const Tensor& dy, const Conv1DParams& p,
                      const Conv1DCache& cache, Conv1DParams& grads) {
  const Tensor& x = cache.input;
  const std::size_t n = x.dim(0), channels = x.dim(2);
  const std::size_t k = p.kernel_size(), filters = p.filters();
  const std::size_t out_steps = x.dim(1) - k + 1;
  if (dy.shape() != Tensor::Shape{n, out_steps, filters}) {
    throw DimensionError("conv1d backward: gradient " + dy.ShapeString() +
                         " does not match output");
  }
  Tensor dx(x.shape());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < out_steps; ++t) {
      const double* dy_row = &dy.at(i, t, 0);
      for (std::size_t f = 0; f < filters; ++f) grads.bias[f] += dy_row[f];
      for (std::size_t j = 0; j < k; ++j) {
        const double* x_row = &x.at(i, t + j, 0);
        double* dk = grads.kernel.data() + j * channels * filters;
        kernels::GemmTN(channels, filters, 1, x_row, dy_row, dk);
        kernels::GemmNT(1, channels, filters, dy_row,
                        p.kernel.data() + j * channels * filters,
                        &dx.at(i, t + j, 0));
      }
    }
  }
  return dx;
}

Tensor MaxPool1DForward(const Tensor& x, int pool, MaxPoolCache* cache) {
  if (x.rank() != 3) {
    throw DimensionError("maxpool1d: expected [n x T x c], got " +
                         x.ShapeString());
  }
  if (pool < 1) throw ConfigError("maxpool1d: pool size must be >= 1");
  const std::size_t n = x.dim(0), steps = x.dim(1), channels = x.dim(2);
  const std::size_t window = static_cast<std::size_t>(pool);
  if (window > steps) {
    throw DimensionError("maxpool1d: pool size " + std::to_string(pool) +
                         " exceeds sequence length " + std::to_string(steps));
  }
  const std::size_t out_steps = steps / window;
  Tensor y({n, out_steps, channels});
  std::vector<std::uint32_t> argmax(y.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < out_steps; ++t) {
      for (std::size_t c = 0; c < channels; ++c) {
        std::size_t best = (i * steps + t * window) * channels + c;
        for (std::size_t w = 1; w < window; ++w) {
          const std::size_t idx = (i * steps + t * window + w) * channels + c;
          if (x[idx] > x[best]) best = idx;
        }
        const std::size_t o = (i * out_steps + t) * channels + c;
        y[o] = x[best];
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
  if (cache) {
    cache->input_shape = x.shape();
    cache->argmax = std::move(argmax);
  }
  return y;
}

Tensor MaxPool1DBackward(const Tensor& dy, const MaxPoolCache& cache) {
  if (dy.size() != cache.argmax.size()) {
    throw DimensionError("maxpool1d backward: gradient " + dy.ShapeString() +
                         " does not match the cached forward");
  }
  Tensor dx(cache.input_shape);
  for (std::size_t o = 0; o < dy.size(); ++o) dx[cache.argmax[o]] += dy[o];
  return dx;
}

Tensor DropoutForward(const Tensor& x, double rate, Mode mode, Rng* rng,
                      DropoutCache* cache) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ConfigError("dropout: rate must lie in [0, 1), got " +
                      std::to_string(rate));
  }
  if (mode == Mode::kEval || rate == 0.0) {
    if (cache) cache->mask = Tensor();
    return x;
  }
  if (!rng) throw std::invalid_argument("dropout: train mode needs an Rng");
  const double keep = 1.0 - rate;
  const double scale = 1.0 / keep;
  Tensor mask(x.shape());
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mask[i] = rng->Uniform() < keep ? scale : 0.0;
    y[i] = x[i] * mask[i];
  }
  if (cache) cache->mask = std::move(mask);
  return y;
}

Tensor DropoutBackward(const Tensor& dy, const DropoutCache& cache) {
  if (cache.mask.empty()) return dy;
  CheckSameShape(dy, cache.mask, "dropout backward");
  Tensor dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = dy[i] * cache.mask[i];
  return dx;
}

Tensor ActivationForward(const Tensor& x, Activation act,
                         ActivationCache* cache) {
  if (cache) cache->input = x;
  if (act == Activation::kIdentity) return x;
  return Elementwise(ElementwiseOp::kRelu, x);
}

Tensor ActivationBackward(const Tensor& dy, Activation act,
                          const ActivationCache& cache) {
  if (act == Activation::kIdentity) return dy;
  CheckSameShape(dy, cache.input, "relu backward");
  Tensor dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) {
    dx[i] = cache.input[i] > 0.0 ? dy[i] : 0.0;
  }
  return dx;
}

}  // namespace ta
