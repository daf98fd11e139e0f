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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.h"
#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/rng.h"

namespace ta {
namespace {

Tensor Random(Tensor::Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.Uniform(-1, 1);
  return t;
}

template <typename Params>
void Jitter(Params& p, Rng& rng) {
  for (auto& t : p.input_weights) for (double& v : t.values()) v += 0.3 * rng.Uniform(-1, 1);
  for (auto& t : p.recurrent_weights) for (double& v : t.values()) v += 0.3 * rng.Uniform(-1, 1);
  for (auto& t : p.biases) for (double& v : t.values()) v += 0.5 * rng.Uniform(-1, 1);
}

// Slice t of an [n x T x d] tensor as [n x d].
Tensor Step(const Tensor& x, std::size_t t) {
  Tensor out({x.dim(0), x.dim(2)});
  for (std::size_t i = 0; i < x.dim(0); ++i)
    for (std::size_t j = 0; j < x.dim(2); ++j) out.at(i, j) = x.at(i, t, j);
  return out;
}

TEST(LstmCellTest, ZeroParamsHandCalculation) {
  Rng rng(0);
  const LstmParams p = ZerosLike(MakeLstmParams(1, 1, rng));
  const LstmState s = LstmCellStep(Tensor({1, 1}), {Tensor({1, 1}, 0.0), Tensor({1, 1}, 0.8)}, p);
  // Every gate is sigmoid(0) = 0.5 and the candidate tanh(0) = 0.
  EXPECT_NEAR(s.c[0], 0.4, 1e-15);
  EXPECT_NEAR(s.h[0], 0.5 * std::tanh(0.4), 1e-15);
  EXPECT_NEAR(s.h[0], 0.18997, 5e-6);
}

TEST(LstmCellTest, ZeroStateIsFixedPoint) {
  Rng rng(0);
  const LstmParams p = ZerosLike(MakeLstmParams(1, 1, rng));
  const LstmState s = LstmCellStep(Tensor({1, 1}, 3.0), {Tensor({1, 1}), Tensor({1, 1})}, p);
  EXPECT_EQ(s.c[0], 0.0);
  EXPECT_EQ(s.h[0], 0.0);
}

TEST(GruCellTest, ZeroParamsHandCalculation) {
  Rng rng(0);
  const GruParams p = ZerosLike(MakeGruParams(1, 1, rng));
  EXPECT_NEAR(GruCellStep(Tensor({1, 1}), {Tensor({1, 1}, 0.4)}, p).h[0], 0.2, 1e-15);
  EXPECT_EQ(GruCellStep(Tensor({1, 1}, 2.0), {Tensor({1, 1})}, p).h[0], 0.0);
}

TEST(GruCellTest, ScalarFormula) {
  Rng rng(0);
  GruParams p = ZerosLike(MakeGruParams(1, 1, rng));
  const double wz = 0.3, wr = -0.2, wh = 0.7, uz = 0.1, ur = 0.4, uh = -0.5;
  const double bz = 0.05, br = -0.1, bh = 0.2, x = 0.9, h = -0.3;
  p.input_weights[kGruUpdate][0] = wz;
  p.input_weights[kGruReset][0] = wr;
  p.input_weights[kGruCandidate][0] = wh;
  p.recurrent_weights[kGruUpdate][0] = uz;
  p.recurrent_weights[kGruReset][0] = ur;
  p.recurrent_weights[kGruCandidate][0] = uh;
  p.biases[kGruUpdate][0] = bz;
  p.biases[kGruReset][0] = br;
  p.biases[kGruCandidate][0] = bh;
  const double z = 1 / (1 + std::exp(-(x * wz + h * uz + bz)));
  const double r = 1 / (1 + std::exp(-(x * wr + h * ur + br)));
  const double cand = std::tanh(x * wh + (r * h) * uh + bh);
  const double expected = z * h + (1 - z) * cand;
  EXPECT_NEAR(GruCellStep(Tensor({1, 1}, x), {Tensor({1, 1}, h)}, p).h[0], expected, 1e-15);
}

TEST(UnrollTest, SingleStepEqualsCell) {
  Rng rng(1);
  LstmParams lp = MakeLstmParams(3, 4, rng);
  GruParams gp = MakeGruParams(3, 4, rng);
  Jitter(lp, rng);
  Jitter(gp, rng);
  const Tensor x = Random({2, 1, 3}, rng);
  const Tensor x0 = Step(x, 0);
  const LstmState ls = LstmCellStep(x0, {Tensor({2, 4}), Tensor({2, 4})}, lp);
  const RecurrentOutput lo = LstmForward(x, lp);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_NEAR(lo.last_hidden[i], ls.h[i], 1e-14);
    EXPECT_NEAR(lo.last_cell[i], ls.c[i], 1e-14);
  }
  const GruState gs = GruCellStep(x0, {Tensor({2, 4})}, gp);
  const RecurrentOutput go = GruForward(x, gp);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(go.last_hidden[i], gs.h[i], 1e-14);
}

TEST(UnrollTest, MatchesRepeatedCellSteps) {
  Rng rng(2);
  LstmParams lp = MakeLstmParams(2, 3, rng);
  GruParams gp = MakeGruParams(2, 3, rng);
  Jitter(lp, rng);
  Jitter(gp, rng);
  const Tensor x = Random({3, 6, 2}, rng);
  LstmState ls{Tensor({3, 3}), Tensor({3, 3})};
  GruState gs{Tensor({3, 3})};
  const RecurrentOutput lo = LstmForward(x, lp);
  const RecurrentOutput go = GruForward(x, gp);
  for (std::size_t t = 0; t < 6; ++t) {
    ls = LstmCellStep(Step(x, t), ls, lp);
    gs = GruCellStep(Step(x, t), gs, gp);
    const Tensor lseq = Step(lo.sequence, t), gseq = Step(go.sequence, t);
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_NEAR(lseq[i], ls.h[i], 1e-13);
      EXPECT_NEAR(gseq[i], gs.h[i], 1e-13);
    }
  }
}

TEST(UnrollTest, ZeroGruStaysZero) {
  Rng rng(3);
  const GruParams p = ZerosLike(MakeGruParams(2, 3, rng));
  const RecurrentOutput out = GruForward(Random({2, 7, 2}, rng), p);
  for (double v : out.last_hidden.values()) EXPECT_EQ(v, 0.0);
}

TEST(UnrollTest, EmptySequenceThrows) {
  Rng rng(4);
  EXPECT_THROW(LstmForward(Tensor({1, 0, 2}), MakeLstmParams(2, 2, rng)), DimensionError);
  EXPECT_THROW(GruForward(Tensor({1, 0, 2}), MakeGruParams(2, 2, rng)), DimensionError);
}

TEST(UnrollTest, InputWidthMismatchThrows) {
  Rng rng(5);
  EXPECT_THROW(LstmForward(Tensor({1, 3, 4}), MakeLstmParams(2, 2, rng)), DimensionError);
}

TEST(InitTest, RecurrentShapesAndOrthogonality) {
  Rng rng(6);
  const LstmParams p = MakeLstmParams(5, 4, rng);
  for (int g = 0; g < 4; ++g) {
    EXPECT_EQ(p.input_weights[g].shape(), (Tensor::Shape{5, 4}));
    const Tensor& u = p.recurrent_weights[g];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int r = 0; r < 4; ++r) s += u.at(r, i) * u.at(r, j);
        EXPECT_NEAR(s, i == j ? 1 : 0, 1e-10);
      }
    for (double b : p.biases[g].values()) EXPECT_EQ(b, 0.0);
  }
}

template <typename Params, typename Fwd, typename Bwd, typename Cache>
void CheckBptt(std::size_t steps, Fwd forward, Bwd backward, Params p, Cache,
               double tol) {
  Rng rng(10 + steps);
  Jitter(p, rng);
  Tensor x = Random({2, steps, p.input_size()}, rng);
  const Tensor proj = Random({2, steps, p.units()}, rng);
  auto loss = [&] { return oracle::Dot(proj, forward(x, p, nullptr).sequence); };
  Cache cache;
  forward(x, p, &cache);
  Params g = ZerosLike(p);
  const Tensor dx = backward(proj, p, cache, g);
  EXPECT_LT(oracle::MaxRelativeError(dx, oracle::NumericGradient(loss, x)), tol);
  for (std::size_t k = 0; k < p.biases.size(); ++k) {
    EXPECT_LT(oracle::MaxRelativeError(g.input_weights[k],
                                       oracle::NumericGradient(loss, p.input_weights[k])), tol);
    EXPECT_LT(oracle::MaxRelativeError(g.recurrent_weights[k],
                                       oracle::NumericGradient(loss, p.recurrent_weights[k])), tol);
    EXPECT_LT(oracle::MaxRelativeError(g.biases[k], oracle::NumericGradient(loss, p.biases[k])), tol);
  }
}

TEST(BpttTest, LstmFiniteDifferences) {
  Rng rng(7);
  for (std::size_t steps : {1, 3, 5}) {
    CheckBptt(steps, [](const Tensor& x, const LstmParams& p, LstmCache* c) { return LstmForward(x, p, c); },
              LstmBackward, MakeLstmParams(3, 4, rng), LstmCache{}, 1e-5);
  }
}

TEST(BpttTest, GruFiniteDifferences) {
  Rng rng(8);
  for (std::size_t steps : {1, 3, 5}) {
    CheckBptt(steps, [](const Tensor& x, const GruParams& p, GruCache* c) { return GruForward(x, p, c); },
              GruBackward, MakeGruParams(3, 4, rng), GruCache{}, 1e-5);
  }
}

TEST(BpttTest, LastStateOnlyGradient) {
  // A loss on h_T alone: every earlier slot of d_sequence is zero.
  Rng rng(9);
  LstmParams p = MakeLstmParams(2, 3, rng);
  Jitter(p, rng);
  Tensor x = Random({2, 4, 2}, rng);
  const Tensor proj = Random({2, 3}, rng);
  auto loss = [&] { return oracle::Dot(proj, LstmForward(x, p).last_hidden); };
  LstmCache cache;
  LstmForward(x, p, &cache);
  Tensor dseq({2, 4, 3});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) dseq.at(i, 3, j) = proj.at(i, j);
  LstmParams g = ZerosLike(p);
  const Tensor dx = LstmBackward(dseq, p, cache, g);
  EXPECT_LT(oracle::MaxRelativeError(dx, oracle::NumericGradient(loss, x)), 1e-5);
}

}  // namespace
}  // namespace ta
