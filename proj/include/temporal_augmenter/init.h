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

#ifndef TEMPORAL_AUGMENTER_INIT_H_
#define TEMPORAL_AUGMENTER_INIT_H_

#include "temporal_augmenter/rng.h"
#include "temporal_augmenter/tensor.h"

namespace ta {

// Uniform on [-L, L] with L = sqrt(6 / (fan_in + fan_out)).
Tensor InitGlorotUniform(int fan_in, int fan_out, Tensor::Shape shape,
                         Rng& rng);

// Uniform on [-L, L] with L = sqrt(6 / fan_in).
Tensor InitHeUniform(int fan_in, Tensor::Shape shape, Rng& rng);

// Orthogonal matrix from the QR factorisation of a gaussian draw, with the
// signs fixed so that diag(R) > 0. For rows >= cols the columns are
// orthonormal; for rows < cols the rows are.
Tensor InitOrthogonal(int rows, int cols, Rng& rng);

double GlorotLimit(int fan_in, int fan_out);
double HeLimit(int fan_in);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_INIT_H_
