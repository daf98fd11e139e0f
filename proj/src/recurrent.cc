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

#include "temporal_augmenter/recurrent.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/init.h"

namespace ta {
namespace {

// Concatenates same-shaped [rows x u] blocks column-wise into [rows x G*u].
template <std::size_t G>
Tensor FuseColumns(const std::array<Tensor, G>& parts, std::size_t first = 0,
                   std::size_t count = G) {
  const std::size_t rows = parts[first].rank() == 1 ? 1 : parts[first].dim(0);
  const std::size_t u = parts[first].shape().back();
  Tensor fused({rows, count * u});
  for (std::size_t g = 0; g < count; ++g) {
    const Tensor& part = parts[first + g];
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < u; ++j) {
        fused[r * count * u + g * u + j] = part[r * u + j];
      }
    }
  }
  return fused;
}

template <std::size_t G>
void AccumulateSplit(const Tensor& fused, std::array<Tensor, G>& parts,
                     std::size_t first = 0, std::size_t count = G) {
  const std::size_t rows = parts[first].rank() == 1 ? 1 : parts[first].dim(0);
  const std::size_t u = parts[first].shape().back();
  for (std::size_t g = 0; g < count; ++g) {
    Tensor& part = parts[first + g];
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < u; ++j) {
        part[r * u + j] += fused[r * count * u + g * u + j];
      }
    }
  }
}

void CheckSequenceInput(const Tensor& x, std::size_t input_size,
                        const char* cell) {
  if (x.rank() != 3 || x.dim(2) != input_size) {
    throw DimensionError(std::string(cell) + ": input " + x.ShapeString() +
                         " does not match input size " +
                         std::to_string(input_size));
  }
  if (x.dim(1) == 0) {
    throw DimensionError(std::string(cell) + ": sequence length T = 0");
  }
}

void CheckStepShapes(const Tensor& x_t, const Tensor& h, std::size_t d,
                     std::size_t u, const char* cell) {
  if (x_t.rank() != 2 || x_t.dim(1) != d || h.rank() != 2 || h.dim(1) != u ||
      h.dim(0) != x_t.dim(0)) {
    throw DimensionError(std::string(cell) + ": input " + x_t.ShapeString() +
                         " and state " + h.ShapeString() +
                         " do not match params [" + std::to_string(d) + "x" +
                         std::to_string(u) + "]");
  }
}

// b + x W + h U for one gate, accumulated in that order.
Tensor Affine(const Tensor& x, const Tensor& w, const Tensor& h,
              const Tensor& u, const Tensor& b) {
  const std::size_t n = x.dim(0), units = w.dim(1);
  Tensor out({n, units});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < units; ++j) out.at(i, j) = b[j];
  }
  kernels::GemmNN(n, units, w.dim(0), x.data(), w.data(), out.data());
  kernels::GemmNN(n, units, units, h.data(), u.data(), out.data());
  return out;
}

// pre[n*T x width] = bias + x_flat W
Tensor InputProjection(const Tensor& x, const Tensor& w, const Tensor& bias) {
  const std::size_t rows = x.dim(0) * x.dim(1);
  const std::size_t width = w.dim(1);
  Tensor pre({rows, width});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < width; ++j) pre[r * width + j] = bias[j];
  }
  kernels::GemmNN(rows, width, x.dim(2), x.data(), w.data(), pre.data());
  return pre;
}

void FinishInputGradients(const Tensor& x, const Tensor& w, const Tensor& dpre,
                          Tensor& dw, Tensor& db, Tensor& dx) {
  const std::size_t rows = x.dim(0) * x.dim(1);
  const std::size_t width = w.dim(1);
  kernels::GemmTN(x.dim(2), width, rows, x.data(), dpre.data(), dw.data());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < width; ++j) db[j] += dpre[r * width + j];
  }
  kernels::GemmNT(rows, x.dim(2), width, dpre.data(), w.data(), dx.data());
}

}  // namespace

LstmParams MakeLstmParams(int input_size, int units, Rng& rng) {
  LstmParams p;
  const std::size_t d = input_size, u = units;
  // Fans of the fused [d x 4u] kernel.
  for (auto& w : p.input_weights) {
    w = InitGlorotUniform(input_size, 4 * units, {d, u}, rng);
  }
  for (auto& r : p.recurrent_weights) r = InitOrthogonal(units, units, rng);
  for (auto& b : p.biases) b = Tensor::Zeros({u});
  return p;
}

GruParams MakeGruParams(int input_size, int units, Rng& rng) {
  GruParams p;
  const std::size_t d = input_size, u = units;
  for (auto& w : p.input_weights) {
    w = InitGlorotUniform(input_size, 3 * units, {d, u}, rng);
  }
  for (auto& r : p.recurrent_weights) r = InitOrthogonal(units, units, rng);
  for (auto& b : p.biases) b = Tensor::Zeros({u});
  return p;
}

LstmParams ZerosLike(const LstmParams& p) {
  LstmParams z;
  for (std::size_t g = 0; g < 4; ++g) {
    z.input_weights[g] = Tensor::Zeros(p.input_weights[g].shape());
    z.recurrent_weights[g] = Tensor::Zeros(p.recurrent_weights[g].shape());
    z.biases[g] = Tensor::Zeros(p.biases[g].shape());
  }
  return z;
}

GruParams ZerosLike(const GruParams& p) {
  GruParams z;
  for (std::size_t g = 0; g < 3; ++g) {
    z.input_weights[g] = Tensor::Zeros(p.input_weights[g].shape());
    z.recurrent_weights[g] = Tensor::Zeros(p.recurrent_weights[g].shape());
    z.biases[g] = Tensor::Zeros(p.biases[g].shape());
  }
  return z;
}

LstmState LstmCellStep(const Tensor& x_t, const LstmState& s,
                       const LstmParams& p) {
  CheckStepShapes(x_t, s.h, p.input_size(), p.units(), "lstm step");
  CheckSameShape(s.h, s.c, "lstm step state");
  auto pre = [&](std::size_t g) {
    return Affine(x_t, p.input_weights[g], s.h, p.recurrent_weights[g],
                  p.biases[g]);
  };
  const Tensor i = Elementwise(ElementwiseOp::kSigmoid, pre(kLstmInput));
  const Tensor f = Elementwise(ElementwiseOp::kSigmoid, pre(kLstmForget));
  const Tensor g = Elementwise(ElementwiseOp::kTanh, pre(kLstmCandidate));
  const Tensor o = Elementwise(ElementwiseOp::kSigmoid, pre(kLstmOutput));
  LstmState next{Tensor(s.h.shape()), Tensor(s.c.shape())};
  for (std::size_t k = 0; k < next.c.size(); ++k) {
    next.c[k] = f[k] * s.c[k] + i[k] * g[k];
    next.h[k] = o[k] * std::tanh(next.c[k]);
  }
  return next;
}

GruState GruCellStep(const Tensor& x_t, const GruState& s, const GruParams& p) {
  CheckStepShapes(x_t, s.h, p.input_size(), p.units(), "gru step");
  const Tensor z = Elementwise(
      ElementwiseOp::kSigmoid,
      Affine(x_t, p.input_weights[kGruUpdate], s.h,
             p.recurrent_weights[kGruUpdate], p.biases[kGruUpdate]));
  const Tensor r = Elementwise(
      ElementwiseOp::kSigmoid,
      Affine(x_t, p.input_weights[kGruReset], s.h,
             p.recurrent_weights[kGruReset], p.biases[kGruReset]));
  const Tensor rh = Elementwise(ElementwiseOp::kMul, r, s.h);
  const Tensor candidate = Elementwise(
      ElementwiseOp::kTanh,
      Affine(x_t, p.input_weights[kGruCandidate], rh,
             p.recurrent_weights[kGruCandidate], p.biases[kGruCandidate]));
  GruState next{Tensor(s.h.shape())};
  for (std::size_t k = 0; k < next.h.size(); ++k) {
    next.h[k] = z[k] * s.h[k] + (1.0 - z[k]) * candidate[k];
  }
  return next;
}

RecurrentOutput LstmForward(const Tensor& x, const LstmParams& p,
                            LstmCache* cache, const LstmState* initial) {
  CheckSequenceInput(x, p.input_size(), "lstm");
  const std::size_t n = x.dim(0), steps = x.dim(1), u = p.units();
  const std::size_t width = 4 * u;
  const Tensor w = FuseColumns(p.input_weights);
  const Tensor r = FuseColumns(p.recurrent_weights);
  const Tensor b = FuseColumns(p.biases);
  Tensor pre = InputProjection(x, w, b);

  Tensor gates({n, steps, width});
  Tensor cells({n, steps + 1, u});
  Tensor hiddens({n, steps + 1, u});
  Tensor cell_tanh({n, steps, u});
  if (initial) {
    if (initial->h.shape() != Tensor::Shape{n, u} ||
        initial->c.shape() != Tensor::Shape{n, u}) {
      throw DimensionError("lstm: initial state shape mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < u; ++j) {
        hiddens.at(i, 0, j) = initial->h.at(i, j);
        cells.at(i, 0, j) = initial->c.at(i, j);
      }
    }
  }

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double* row = pre.data() + (i * steps + t) * width;
      kernels::GemmNN(1, width, u, &hiddens.at(i, t, 0), r.data(), row);
      double* act = &gates.at(i, t, 0);
      for (std::size_t j = 0; j < u; ++j) {
        act[kLstmInput * u + j] = Sigmoid(row[kLstmInput * u + j]);
        act[kLstmForget * u + j] = Sigmoid(row[kLstmForget * u + j]);
        act[kLstmCandidate * u + j] = std::tanh(row[kLstmCandidate * u + j]);
        act[kLstmOutput * u + j] = Sigmoid(row[kLstmOutput * u + j]);
        const double c = act[kLstmForget * u + j] * cells.at(i, t, j) +
                         act[kLstmInput * u + j] * act[kLstmCandidate * u + j];
        const double tc = std::tanh(c);
        cells.at(i, t + 1, j) = c;
        cell_tanh.at(i, t, j) = tc;
        hiddens.at(i, t + 1, j) = act[kLstmOutput * u + j] * tc;
      }
    }
  }

  RecurrentOutput out{Tensor({n, steps, u}), Tensor({n, u}), Tensor({n, u})};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t j = 0; j < u; ++j) {
        out.sequence.at(i, t, j) = hiddens.at(i, t + 1, j);
      }
    }
    for (std::size_t j = 0; j < u; ++j) {
      out.last_hidden.at(i, j) = hiddens.at(i, steps, j);
      out.last_cell.at(i, j) = cells.at(i, steps, j);
    }
  }
  if (cache) {
    cache->input = x;
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->hiddens = std::move(hiddens);
    cache->cell_tanh = std::move(cell_tanh);
  }
  return out;
}

Tensor LstmBackward(const Tensor& d_sequence, const LstmParams& p,
                    const LstmCache& cache, LstmParams& grads) {
  const Tensor& x = cache.input;
  const std::size_t n = x.dim(0), steps = x.dim(1), u = p.units();
  const std::size_t width = 4 * u;
  if (d_sequence.shape() != Tensor::Shape{n, steps, u}) {
    throw DimensionError("lstm backward: gradient " +
                         d_sequence.ShapeString() +
                         " does not match hidden sequence");
  }
  const Tensor w = FuseColumns(p.input_weights);
  const Tensor r = FuseColumns(p.recurrent_weights);
  Tensor dr({u, width});
  Tensor dpre({n * steps, width});
  Tensor dh({n, u});
  Tensor dc({n, u});
  std::vector<double> dh_prev(u);

  for (std::size_t t = steps; t-- > 0;) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* act = &cache.gates.at(i, t, 0);
      double* da = dpre.data() + (i * steps + t) * width;
      for (std::size_t j = 0; j < u; ++j) {
        const double gi = act[kLstmInput * u + j];
        const double gf = act[kLstmForget * u + j];
        const double gg = act[kLstmCandidate * u + j];
        const double go = act[kLstmOutput * u + j];
        const double tc = cache.cell_tanh.at(i, t, j);
        const double dh_total = dh.at(i, j) + d_sequence.at(i, t, j);
        const double d_out = dh_total * tc;
        const double d_cell = dc.at(i, j) + dh_total * go * (1.0 - tc * tc);
        da[kLstmInput * u + j] = d_cell * gg * gi * (1.0 - gi);
        da[kLstmForget * u + j] =
            d_cell * cache.cells.at(i, t, j) * gf * (1.0 - gf);
        da[kLstmCandidate * u + j] = d_cell * gi * (1.0 - gg * gg);
        da[kLstmOutput * u + j] = d_out * go * (1.0 - go);
        dc.at(i, j) = d_cell * gf;
      }
      std::fill(dh_prev.begin(), dh_prev.end(), 0.0);
      kernels::GemmNT(1, u, width, da, r.data(), dh_prev.data());
      kernels::GemmTN(u, width, 1, &cache.hiddens.at(i, t, 0), da, dr.data());
      for (std::size_t j = 0; j < u; ++j) dh.at(i, j) = dh_prev[j];
    }
  }

  Tensor dw(w.shape());
  Tensor db({1, width});
  Tensor dx(x.shape());
  FinishInputGradients(x, w, dpre, dw, db, dx);
  AccumulateSplit(dw, grads.input_weights);
  AccumulateSplit(dr, grads.recurrent_weights);
  AccumulateSplit(db, grads.biases);
  return dx;
}

RecurrentOutput GruForward(const Tensor& x, const GruParams& p,
                           GruCache* cache, const GruState* initial) {
  CheckSequenceInput(x, p.input_size(), "gru");
  const std::size_t n = x.dim(0), steps = x.dim(1), u = p.units();
  const std::size_t width = 3 * u;
  const Tensor w = FuseColumns(p.input_weights);
  const Tensor r_gates = FuseColumns(p.recurrent_weights, kGruUpdate, 2);
  const Tensor& r_cand = p.recurrent_weights[kGruCandidate];
  const Tensor b = FuseColumns(p.biases);
  Tensor pre = InputProjection(x, w, b);

  Tensor gates({n, steps, width});
  Tensor hiddens({n, steps + 1, u});
  Tensor reset_hidden({n, steps, u});
  if (initial) {
    if (initial->h.shape() != Tensor::Shape{n, u}) {
      throw DimensionError("gru: initial state shape mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < u; ++j) {
        hiddens.at(i, 0, j) = initial->h.at(i, j);
      }
    }
  }

  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double* row = pre.data() + (i * steps + t) * width;
      const double* h_prev = &hiddens.at(i, t, 0);
      kernels::GemmNN(1, 2 * u, u, h_prev, r_gates.data(), row);
      double* act = &gates.at(i, t, 0);
      double* rh = &reset_hidden.at(i, t, 0);
      for (std::size_t j = 0; j < u; ++j) {
        act[kGruUpdate * u + j] = Sigmoid(row[kGruUpdate * u + j]);
        act[kGruReset * u + j] = Sigmoid(row[kGruReset * u + j]);
        rh[j] = act[kGruReset * u + j] * h_prev[j];
      }
      kernels::GemmNN(1, u, u, rh, r_cand.data(), row + kGruCandidate * u);
      for (std::size_t j = 0; j < u; ++j) {
        const double z = act[kGruUpdate * u + j];
        const double cand = std::tanh(row[kGruCandidate * u + j]);
        act[kGruCandidate * u + j] = cand;
        hiddens.at(i, t + 1, j) = z * h_prev[j] + (1.0 - z) * cand;
      }
    }
  }

  RecurrentOutput out{Tensor({n, steps, u}), Tensor({n, u}), Tensor()};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t j = 0; j < u; ++j) {
        out.sequence.at(i, t, j) = hiddens.at(i, t + 1, j);
      }
    }
    for (std::size_t j = 0; j < u; ++j) {
      out.last_hidden.at(i, j) = hiddens.at(i, steps, j);
    }
  }
  if (cache) {
    cache->input = x;
    cache->gates = std::move(gates);
    cache->hiddens = std::move(hiddens);
    cache->reset_hidden = std::move(reset_hidden);
  }
  return out;
}

Tensor GruBackward(const Tensor& d_sequence, const GruParams& p,
                   const GruCache& cache, GruParams& grads) {
  const Tensor& x = cache.input;
  const std::size_t n = x.dim(0), steps = x.dim(1), u = p.units();
  const std::size_t width = 3 * u;
  if (d_sequence.shape() != Tensor::Shape{n, steps, u}) {
    throw DimensionError("gru backward: gradient " + d_sequence.ShapeString() +
                         " does not match hidden sequence");
  }
  const Tensor w = FuseColumns(p.input_weights);
  const Tensor r_gates = FuseColumns(p.recurrent_weights, kGruUpdate, 2);
  const Tensor& r_cand = p.recurrent_weights[kGruCandidate];
  Tensor dr_gates({u, 2 * u});
  Tensor dr_cand({u, u});
  Tensor dpre({n * steps, width});
  Tensor dh({n, u});
  std::vector<double> d_rh(u), dh_prev(u);

  for (std::size_t t = steps; t-- > 0;) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* act = &cache.gates.at(i, t, 0);
      const double* h_prev = &cache.hiddens.at(i, t, 0);
      const double* rh = &cache.reset_hidden.at(i, t, 0);
      double* da = dpre.data() + (i * steps + t) * width;
      for (std::size_t j = 0; j < u; ++j) {
        const double z = act[kGruUpdate * u + j];
        const double cand = act[kGruCandidate * u + j];
        const double dh_total = dh.at(i, j) + d_sequence.at(i, t, j);
        da[kGruUpdate * u + j] = dh_total * (h_prev[j] - cand) * z * (1.0 - z);
        da[kGruCandidate * u + j] = dh_total * (1.0 - z) * (1.0 - cand * cand);
        dh_prev[j] = dh_total * z;
      }
      std::fill(d_rh.begin(), d_rh.end(), 0.0);
      kernels::GemmNT(1, u, u, da + kGruCandidate * u, r_cand.data(),
                      d_rh.data());
      kernels::GemmTN(u, u, 1, rh, da + kGruCandidate * u, dr_cand.data());
      for (std::size_t j = 0; j < u; ++j) {
        const double r = act[kGruReset * u + j];
        da[kGruReset * u + j] = d_rh[j] * h_prev[j] * r * (1.0 - r);
        dh_prev[j] += d_rh[j] * r;
      }
      kernels::GemmNT(1, u, 2 * u, da, r_gates.data(), dh_prev.data());
      kernels::GemmTN(u, 2 * u, 1, h_prev, da, dr_gates.data());
      for (std::size_t j = 0; j < u; ++j) dh.at(i, j) = dh_prev[j];
    }
  }

  Tensor dw(w.shape());
  Tensor db({1, width});
  Tensor dx(x.shape());
  FinishInputGradients(x, w, dpre, dw, db, dx);
  AccumulateSplit(dw, grads.input_weights);
  AccumulateSplit(dr_gates, grads.recurrent_weights, kGruUpdate, 2);
  for (std::size_t k = 0; k < dr_cand.size(); ++k) {
    grads.recurrent_weights[kGruCandidate][k] += dr_cand[k];
  }
  AccumulateSplit(db, grads.biases);
  return dx;
}

}  // namespace ta
