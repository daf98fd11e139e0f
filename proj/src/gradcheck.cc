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

#include "temporal_augmenter/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>

#include "temporal_augmenter/data.h"
#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/layers.h"
#include "temporal_augmenter/model.h"
#include "temporal_augmenter/optim.h"
#include "temporal_augmenter/recurrent.h"
#include "temporal_augmenter/rng.h"
#include "temporal_augmenter/tensor.h"

namespace ta {
namespace {

constexpr double kKinkMargin = 1e-3;

// A differentiable function of some tensors. forward() returns the output;
// backward(dy) returns dL/d(input) for every input, in order.
struct Problem {
  std::vector<Tensor*> inputs;
  std::function<Tensor()> forward;
  std::function<std::vector<Tensor>(const Tensor&)> backward;
  // The output is already a scalar loss.
  bool scalar = false;
};

Tensor RandomTensor(Tensor::Shape shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = scale * rng.Uniform(-1.0, 1.0);
  return t;
}

void Jitter(Tensor& t, Rng& rng, double scale) {
  for (double& v : t.values()) v += scale * rng.Uniform(-1.0, 1.0);
}

double Dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

GradcheckResult Check(std::string component, std::string module,
                      Problem& problem, Rng& rng,
                      const GradcheckOptions& options) {
  const Tensor y = problem.forward();
  const Tensor proj = problem.scalar ? Tensor({1}, 1.0)
                                     : RandomTensor(y.shape(), rng);
  auto loss = [&] { return Dot(proj, problem.forward()); };

  std::vector<Tensor> analytic = problem.backward(proj);
  if (options.corrupt == module) {
    for (Tensor& g : analytic) {
      if (!g.empty()) g[0] = 1.1 * g[0] + 1e-3;
    }
  }

  GradcheckResult result;
  result.component = std::move(component);
  result.module = std::move(module);
  const double h = options.step;
  for (std::size_t t = 0; t < problem.inputs.size(); ++t) {
    Tensor& x = *problem.inputs[t];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double saved = x[i];
      x[i] = saved + h;
      const double plus = loss();
      x[i] = saved - h;
      const double minus = loss();
      x[i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      result.max_rel_error =
          std::max(result.max_rel_error, RelativeError(analytic[t][i], numeric));
      ++result.checked;
    }
  }
  result.passed = result.max_rel_error < kGradcheckTolerance;
  return result;
}

GradcheckResult Merge(std::vector<GradcheckResult> parts, std::string name) {
  GradcheckResult out = parts.front();
  out.component = std::move(name);
  out.max_rel_error = 0.0;
  out.checked = 0;
  out.passed = true;
  for (const auto& p : parts) {
    out.max_rel_error = std::max(out.max_rel_error, p.max_rel_error);
    out.checked += p.checked;
    out.passed = out.passed && p.passed;
  }
  return out;
}

GradcheckResult CheckDense(Rng& rng, const GradcheckOptions& opt) {
  Tensor x = RandomTensor({3, 4}, rng);
  DenseParams p{RandomTensor({4, 5}, rng), RandomTensor({5}, rng)};
  Problem prob;
  prob.inputs = {&x, &p.weight, &p.bias};
  prob.forward = [&] { return DenseForward(x, p); };
  prob.backward = [&](const Tensor& dy) {
    DenseCache cache;
    DenseForward(x, p, &cache);
    DenseParams g = ZerosLike(p);
    Tensor dx = DenseBackward(dy, p, cache, g);
    return std::vector<Tensor>{dx, g.weight, g.bias};
  };
  return Check("dense", "dense", prob, rng, opt);
}

GradcheckResult CheckConv(Rng& rng, const GradcheckOptions& opt) {
  Tensor x = RandomTensor({2, 6, 3}, rng);
  Conv1DParams p{RandomTensor({3, 3, 4}, rng), RandomTensor({4}, rng)};
  Problem prob;
  prob.inputs = {&x, &p.kernel, &p.bias};
  prob.forward = [&] { return Conv1DForward(x, p); };
  prob.backward = [&](const Tensor& dy) {
    Conv1DCache cache;
    Conv1DForward(x, p, &cache);
    Conv1DParams g = ZerosLike(p);
    Tensor dx = Conv1DBackward(dy, p, cache, g);
    return std::vector<Tensor>{dx, g.kernel, g.bias};
  };
  return Check("conv1d", "conv1d", prob, rng, opt);
}

GradcheckResult CheckMaxPool(Rng& rng, const GradcheckOptions& opt) {
  // Distinct values spaced 0.1 apart keep every window far from a tie.
  Tensor x({2, 7, 3});
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.Shuffle(order);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.1 * static_cast<double>(order[i]) - 1.0;
  }
  Problem prob;
  prob.inputs = {&x};
  prob.forward = [&] { return MaxPool1DForward(x, 2); };
  prob.backward = [&](const Tensor& dy) {
    MaxPoolCache cache;
    MaxPool1DForward(x, 2, &cache);
    return std::vector<Tensor>{MaxPool1DBackward(dy, cache)};
  };
  return Check("maxpool1d", "maxpool", prob, rng, opt);
}

GradcheckResult CheckDropout(Rng& rng, const GradcheckOptions& opt) {
  Tensor x = RandomTensor({3, 5}, rng);
  const Rng mask_rng = rng.Fork(17);
  Problem prob;
  prob.inputs = {&x};
  prob.forward = [&] {
    Rng r = mask_rng;
    return DropoutForward(x, 0.3, Mode::kTrain, &r);
  };
  prob.backward = [&](const Tensor& dy) {
    Rng r = mask_rng;
    DropoutCache cache;
    DropoutForward(x, 0.3, Mode::kTrain, &r, &cache);
    return std::vector<Tensor>{DropoutBackward(dy, cache)};
  };
  return Check("dropout", "dropout", prob, rng, opt);
}

GradcheckResult CheckRelu(Rng& rng, const GradcheckOptions& opt) {
  Tensor x = RandomTensor({3, 5}, rng);
  for (double& v : x.values()) v += v < 0.0 ? -0.05 : 0.05;
  Problem prob;
  prob.inputs = {&x};
  prob.forward = [&] { return ActivationForward(x, Activation::kRelu); };
  prob.backward = [&](const Tensor& dy) {
    ActivationCache cache;
    ActivationForward(x, Activation::kRelu, &cache);
    return std::vector<Tensor>{
        ActivationBackward(dy, Activation::kRelu, cache)};
  };
  return Check("relu", "relu", prob, rng, opt);
}

template <typename Params>
void RandomizeCell(Params& p, Rng& rng) {
  for (auto& w : p.input_weights) Jitter(w, rng, 0.3);
  for (auto& u : p.recurrent_weights) Jitter(u, rng, 0.3);
  for (auto& b : p.biases) Jitter(b, rng, 0.5);
}

template <typename Params>
void AppendCellInputs(Params& p, std::vector<Tensor*>& inputs) {
  for (auto& w : p.input_weights) inputs.push_back(&w);
  for (auto& u : p.recurrent_weights) inputs.push_back(&u);
  for (auto& b : p.biases) inputs.push_back(&b);
}

template <typename Params>
void AppendCellGrads(const Params& g, std::vector<Tensor>& out) {
  for (const auto& w : g.input_weights) out.push_back(w);
  for (const auto& u : g.recurrent_weights) out.push_back(u);
  for (const auto& b : g.biases) out.push_back(b);
}

GradcheckResult CheckLstm(std::size_t steps, Rng& rng,
                          const GradcheckOptions& opt) {
  Tensor x = RandomTensor({2, steps, 3}, rng);
  LstmParams p = MakeLstmParams(3, 4, rng);
  RandomizeCell(p, rng);
  Problem prob;
  prob.inputs = {&x};
  AppendCellInputs(p, prob.inputs);
  prob.forward = [&] { return LstmForward(x, p).sequence; };
  prob.backward = [&](const Tensor& dy) {
    LstmCache cache;
    LstmForward(x, p, &cache);
    LstmParams g = ZerosLike(p);
    std::vector<Tensor> out{LstmBackward(dy, p, cache, g)};
    AppendCellGrads(g, out);
    return out;
  };
  return Check("lstm[T=" + std::to_string(steps) + "]", "lstm", prob, rng,
               opt);
}

GradcheckResult CheckGru(std::size_t steps, Rng& rng,
                         const GradcheckOptions& opt) {
  Tensor x = RandomTensor({2, steps, 3}, rng);
  GruParams p = MakeGruParams(3, 4, rng);
  RandomizeCell(p, rng);
  Problem prob;
  prob.inputs = {&x};
  AppendCellInputs(p, prob.inputs);
  prob.forward = [&] { return GruForward(x, p).sequence; };
  prob.backward = [&](const Tensor& dy) {
    GruCache cache;
    GruForward(x, p, &cache);
    GruParams g = ZerosLike(p);
    std::vector<Tensor> out{GruBackward(dy, p, cache, g)};
    AppendCellGrads(g, out);
    return out;
  };
  return Check("gru[T=" + std::to_string(steps) + "]", "gru", prob, rng, opt);
}

GradcheckResult CheckCce(Rng& rng, const GradcheckOptions& opt) {
  Tensor logits = RandomTensor({4, 3}, rng, 2.0);
  std::vector<int> labels{0, 2, 1, 2};
  const Tensor onehot = OneHot(labels, 3);
  Problem prob;
  prob.scalar = true;
  prob.inputs = {&logits};
  prob.forward = [&] {
    return Tensor({1}, CategoricalCrossEntropy(Softmax(logits), onehot).loss);
  };
  prob.backward = [&](const Tensor&) {
    return std::vector<Tensor>{
        CategoricalCrossEntropy(Softmax(logits), onehot).d_logits};
  };
  return Check("cce", "cce", prob, rng, opt);
}

// Smallest distance of any kink input from its kink: ReLU inputs from 0 and
// max-pool winners from the runner-up.
double KinkMargin(const ForwardTrace& trace, const ModelConfig& config) {
  double margin = std::numeric_limits<double>::infinity();
  const bool relu = config.conv_activation == Activation::kRelu;
  auto visit = [&](const StreamTrace& s) {
    const Tensor& pre = s.activation.input;
    const std::size_t n = pre.dim(0), steps = pre.dim(1), f = pre.dim(2);
    const std::size_t pool = static_cast<std::size_t>(config.pool_size);
    for (double v : pre.values()) {
      if (relu) margin = std::min(margin, std::abs(v));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t w = 0; w + pool <= steps; w += pool) {
        for (std::size_t c = 0; c < f; ++c) {
          double best = -std::numeric_limits<double>::infinity();
          double second = best;
          for (std::size_t t = w; t < w + pool; ++t) {
            double v = pre.at(i, t, c);
            if (relu) v = std::max(v, 0.0);
            if (v > best) {
              second = best;
              best = v;
            } else if (v > second) {
              second = v;
            }
          }
          // Clamped ties stay clamped under small perturbations.
          if (relu && best == 0.0) continue;
          if (pool > 1) margin = std::min(margin, best - second);
        }
      }
    }
  };
  if (config.has_short()) visit(trace.short_stream);
  if (config.has_long()) visit(trace.long_stream);
  for (const ActivationCache& a : trace.dense_activation) {
    for (double v : a.input.values()) margin = std::min(margin, std::abs(v));
  }
  return margin;
}

GradcheckResult CheckModel(const std::string& name, const ModelConfig& config,
                           std::uint64_t seed, const GradcheckOptions& opt) {
  const std::size_t n = 3;
  Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    TemporalAugmenterModel model = Build(config, rng.NextU64());
    for (auto& [tensor_name, t] : NamedTensors(model.mutable_params())) {
      Jitter(*t, rng, 0.2);
    }
    Tensor x = RandomTensor({n, static_cast<std::size_t>(config.input_timesteps),
                             static_cast<std::size_t>(config.input_channels)},
                            rng);
    std::vector<int> labels(n);
    for (int& y : labels) y = static_cast<int>(rng.Below(config.num_classes));
    const Tensor onehot = OneHot(labels, config.num_classes);
    const Rng dropout_rng = rng.Fork(99);

    ForwardTrace probe;
    Rng r0 = dropout_rng;
    Forward(model, x, Mode::kTrain, &r0, &probe);
    if (KinkMargin(probe, config) < kKinkMargin) continue;

    Problem prob;
    prob.scalar = true;
    for (auto& [tensor_name, t] : NamedTensors(model.mutable_params())) {
      prob.inputs.push_back(t);
    }
    prob.forward = [&] {
      Rng r = dropout_rng;
      const ForwardResult out = Forward(model, x, Mode::kTrain, &r);
      return Tensor({1}, CategoricalCrossEntropy(out.probs, onehot).loss);
    };
    prob.backward = [&](const Tensor&) {
      Rng r = dropout_rng;
      ForwardTrace trace;
      const ForwardResult out = Forward(model, x, Mode::kTrain, &r, &trace);
      const CceResult cce = CategoricalCrossEntropy(out.probs, onehot);
      ModelParams grads = Backward(model, trace, cce.d_logits);
      std::vector<Tensor> flat;
      for (auto& [tensor_name, t] : NamedTensors(grads)) flat.push_back(*t);
      return flat;
    };
    return Check(name, "model", prob, rng, opt);
  }
  throw std::runtime_error("gradcheck: could not draw a kink-free model input");
}

std::vector<GradcheckResult> CheckModels(const GradcheckOptions& opt) {
  ModelConfig tiny;
  tiny.input_timesteps = 4;
  tiny.input_channels = 1;
  tiny.conv_filters = 3;
  tiny.lstm_units = 2;
  tiny.gru_units = 2;
  tiny.dense_sizes = {4, 3};
  tiny.num_classes = 2;

  ModelConfig wide = tiny;
  wide.input_timesteps = 9;
  wide.input_channels = 2;
  wide.conv_kernel = 2;
  wide.lstm_units = 3;
  wide.dense_sizes = {5};
  wide.num_classes = 3;
  wide.dropout_stream = 0.25;
  wide.dropout_head = 0.25;

  ModelConfig sequence = wide;
  sequence.stream_output = StreamOutput::kSequence;
  sequence.conv_activation = Activation::kIdentity;

  ModelConfig long_only = tiny;
  long_only.streams = StreamSet::kLongOnly;
  ModelConfig short_only = tiny;
  short_only.streams = StreamSet::kShortOnly;

  std::vector<GradcheckResult> tiny_runs;
  for (std::uint64_t s = 0; s < 5; ++s) {
    tiny_runs.push_back(CheckModel("model[tiny]", tiny, opt.seed * 1000 + s, opt));
  }
  std::vector<GradcheckResult> out{Merge(std::move(tiny_runs), "model[tiny x5]")};
  out.push_back(CheckModel("model[dropout]", wide, opt.seed * 1000 + 11, opt));
  out.push_back(CheckModel("model[sequence]", sequence, opt.seed * 1000 + 12, opt));
  out.push_back(CheckModel("model[long-only]", long_only, opt.seed * 1000 + 13, opt));
  out.push_back(CheckModel("model[short-only]", short_only, opt.seed * 1000 + 14, opt));
  return out;
}

}  // namespace

std::vector<std::string> GradcheckModules() {
  return {"dense", "conv1d", "maxpool", "dropout", "relu",
          "lstm",  "gru",    "model",   "cce"};
}

double RelativeError(double analytic, double numeric) {
  const double scale =
      std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

std::vector<GradcheckResult> RunGradcheck(const GradcheckOptions& opt) {
  const auto modules = GradcheckModules();
  if (opt.module != "all" &&
      std::find(modules.begin(), modules.end(), opt.module) == modules.end()) {
    throw ConfigError("gradcheck: unknown module '" + opt.module + "'");
  }
  auto selected = [&](const char* m) {
    return opt.module == "all" || opt.module == m;
  };
  Rng rng(opt.seed);
  std::vector<GradcheckResult> out;
  if (selected("dense")) out.push_back(CheckDense(rng, opt));
  if (selected("conv1d")) out.push_back(CheckConv(rng, opt));
  if (selected("maxpool")) out.push_back(CheckMaxPool(rng, opt));
  if (selected("dropout")) out.push_back(CheckDropout(rng, opt));
  if (selected("relu")) out.push_back(CheckRelu(rng, opt));
  for (std::size_t steps : {1, 2, 5}) {
    if (selected("lstm")) out.push_back(CheckLstm(steps, rng, opt));
  }
  for (std::size_t steps : {1, 2, 5}) {
    if (selected("gru")) out.push_back(CheckGru(steps, rng, opt));
  }
  if (selected("model")) {
    for (auto& r : CheckModels(opt)) out.push_back(std::move(r));
  }
  if (selected("cce")) out.push_back(CheckCce(rng, opt));
  return out;
}

}  // namespace ta
