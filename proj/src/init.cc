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

#include "temporal_augmenter/init.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "temporal_augmenter/errors.h"

namespace ta {
namespace {

Tensor UniformTensor(double limit, Tensor::Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.Uniform(-limit, limit);
  return t;
}

// Modified Gram-Schmidt with a second orthogonalisation pass over the
// columns of a tall [rows x cols] matrix, in place.
void OrthonormalizeColumns(std::vector<double>& a, std::size_t rows,
                           std::size_t cols) {
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          dot += a[i * cols + p] * a[i * cols + j];
        }
        for (std::size_t i = 0; i < rows; ++i) {
          a[i * cols + j] -= dot * a[i * cols + p];
        }
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm += a[i * cols + j] * a[i * cols + j];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < rows; ++i) a[i * cols + j] /= norm;
  }
}

}  // namespace

double GlorotLimit(int fan_in, int fan_out) {
  if (fan_in <= 0 || fan_out <= 0) {
    throw ConfigError("glorot_uniform: fans must be positive, got " +
                      std::to_string(fan_in) + ", " + std::to_string(fan_out));
  }
  return std::sqrt(6.0 / (fan_in + fan_out));
}

double HeLimit(int fan_in) {
  if (fan_in <= 0) {
    throw ConfigError("he_uniform: fan_in must be positive, got " +
                      std::to_string(fan_in));
  }
  return std::sqrt(6.0 / fan_in);
}

Tensor InitGlorotUniform(int fan_in, int fan_out, Tensor::Shape shape,
                         Rng& rng) {
  return UniformTensor(GlorotLimit(fan_in, fan_out), std::move(shape), rng);
}

Tensor InitHeUniform(int fan_in, Tensor::Shape shape, Rng& rng) {
  return UniformTensor(HeLimit(fan_in), std::move(shape), rng);
}

Tensor InitOrthogonal(int rows, int cols, Rng& rng) {
  if (rows <= 0 || cols <= 0) {
    throw ConfigError("orthogonal: dimensions must be positive, got " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  }
  const bool tall = rows >= cols;
  const std::size_t m = tall ? rows : cols;
  const std::size_t n = tall ? cols : rows;
  std::vector<double> a(m * n);
  for (double& v : a) v = rng.Normal();
  OrthonormalizeColumns(a, m, n);
  if (tall) return Tensor({m, n}, std::move(a));
  Tensor out({n, m});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.at(j, i) = a[i * n + j];
  }
  return out;
}

}  // namespace ta
