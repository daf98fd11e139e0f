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

#ifndef TEMPORAL_AUGMENTER_RECURRENT_H_
#define TEMPORAL_AUGMENTER_RECURRENT_H_

#include <array>
#include <cstddef>

#include "temporal_augmenter/rng.h"
#include "temporal_augmenter/tensor.h"

namespace ta {

// Gate slots of LstmParams. Per gate: W [d x u], U [u x u], b [u].
enum LstmGate : std::size_t { kLstmInput = 0, kLstmForget, kLstmCandidate, kLstmOutput };
// Gate slots of GruParams.
enum GruGate : std::size_t { kGruUpdate = 0, kGruReset, kGruCandidate };

struct LstmParams {
  std::array<Tensor, 4> input_weights;
  std::array<Tensor, 4> recurrent_weights;
  std::array<Tensor, 4> biases;

  std::size_t input_size() const { return input_weights[0].dim(0); }
  std::size_t units() const { return input_weights[0].dim(1); }
};

struct GruParams {
  std::array<Tensor, 3> input_weights;
  std::array<Tensor, 3> recurrent_weights;
  std::array<Tensor, 3> biases;

  std::size_t input_size() const { return input_weights[0].dim(0); }
  std::size_t units() const { return input_weights[0].dim(1); }
};

struct LstmState {
  Tensor h;  // [n x u]
  Tensor c;  // [n x u]
};

struct GruState {
  Tensor h;  // [n x u]
};

// Input kernels glorot-uniform over the fused [d x gates*u] kernel, recurrent
// kernels orthogonal per gate, biases zero.
LstmParams MakeLstmParams(int input_size, int units, Rng& rng);
GruParams MakeGruParams(int input_size, int units, Rng& rng);

LstmParams ZerosLike(const LstmParams& p);
GruParams ZerosLike(const GruParams& p);

// f = s(xW_f + hU_f + b_f), i, o likewise, g = tanh(...),
// c' = f*c + i*g, h' = o*tanh(c').
LstmState LstmCellStep(const Tensor& x_t, const LstmState& s,
                       const LstmParams& p);

// z = s(xW_z + hU_z + b_z), r = s(xW_r + hU_r + b_r),
// h~ = tanh(xW_h + (r*h)U_h + b_h), h' = z*h + (1-z)*h~.
GruState GruCellStep(const Tensor& x_t, const GruState& s, const GruParams& p);

// Everything the backward pass needs from an unrolled forward.
struct LstmCache {
  Tensor input;    // [n x T x d]
  Tensor gates;    // [n x T x 4u] post-activation i, f, g, o
  Tensor cells;    // [n x (T+1) x u], slot 0 is c0
  Tensor hiddens;  // [n x (T+1) x u], slot 0 is h0
  Tensor cell_tanh;  // [n x T x u]
};

struct GruCache {
  Tensor input;      // [n x T x d]
  Tensor gates;      // [n x T x 3u] post-activation z, r, h~
  Tensor hiddens;    // [n x (T+1) x u]
  Tensor reset_hidden;  // [n x T x u], r * h_{t-1}
};

struct RecurrentOutput {
  Tensor sequence;     // [n x T x u], h_1..h_T
  Tensor last_hidden;  // [n x u]
  Tensor last_cell;    // [n x u]; LSTM only
};

// Runs the cell over t = 1..T. The initial state defaults to zeros.
RecurrentOutput LstmForward(const Tensor& x, const LstmParams& p,
                            LstmCache* cache = nullptr,
                            const LstmState* initial = nullptr);
RecurrentOutput GruForward(const Tensor& x, const GruParams& p,
                           GruCache* cache = nullptr,
                           const GruState* initial = nullptr);

// d_sequence holds dL/dh_t for every step ([n x T x u]); a loss on the last
// state only puts its gradient in slot T-1. Parameter gradients accumulate
// into grads; dL/dx is returned.
Tensor LstmBackward(const Tensor& d_sequence, const LstmParams& p,
                    const LstmCache& cache, LstmParams& grads);
Tensor GruBackward(const Tensor& d_sequence, const GruParams& p,
                   const GruCache& cache, GruParams& grads);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_RECURRENT_H_
