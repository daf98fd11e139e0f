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

#include "temporal_augmenter/model.h"

#include <stdexcept>
#include <string>
#include <utility>

#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/init.h"

namespace ta {
namespace {

void Require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("model config: " + what);
}

Conv1DParams MakeConv(const ModelConfig& c, Rng& rng) {
  const std::size_t k = c.conv_kernel, d = c.input_channels,
                    f = c.conv_filters;
  // Conv fans count kernel_size * channels.
  return {InitHeUniform(c.conv_kernel * c.input_channels, {k, d, f}, rng),
          Tensor::Zeros({f})};
}

DenseParams MakeDense(int in, int out, Rng& rng) {
  const std::size_t i = in, o = out;
  return {InitGlorotUniform(in, out, {i, o}, rng), Tensor::Zeros({o})};
}

// Flattens a stream's recurrent output into the slice it contributes to
// the concatenation.
Tensor StreamFeatures(const RecurrentOutput& out, StreamOutput mode) {
  if (mode == StreamOutput::kLastState) return out.last_hidden;
  const std::size_t n = out.sequence.dim(0);
  return out.sequence.Reshaped({n, out.sequence.size() / n});
}

// conv -> activation -> pool -> dropout, shared by both streams.
Tensor StreamFrontForward(const ModelConfig& c, const Conv1DParams& conv,
                          const Tensor& x, Mode mode, Rng* rng,
                          StreamTrace* st) {
  Tensor y = Conv1DForward(x, conv, st ? &st->conv : nullptr);
  y = ActivationForward(y, c.conv_activation, st ? &st->activation : nullptr);
  y = MaxPool1DForward(y, c.pool_size, st ? &st->pool : nullptr);
  return DropoutForward(y, c.dropout_stream, mode, rng,
                        st ? &st->dropout : nullptr);
}

void StreamFrontBackward(const ModelConfig& c, const Conv1DParams& conv,
                         const StreamTrace& st, Tensor d, Conv1DParams& grads) {
  d = DropoutBackward(d, st.dropout);
  d = MaxPool1DBackward(d, st.pool);
  d = ActivationBackward(d, c.conv_activation, st.activation);
  Conv1DBackward(d, conv, st.conv, grads);
}

// Routes the concat slice gradient back to dL/dh_t for each step.
Tensor SequenceGradient(const Tensor& d_features, std::size_t n,
                        std::size_t steps, std::size_t units,
                        StreamOutput mode) {
  if (mode == StreamOutput::kSequence) {
    return d_features.Reshaped({n, steps, units});
  }
  Tensor d_seq({n, steps, units});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < units; ++j) {
      d_seq.at(i, steps - 1, j) = d_features.at(i, j);
    }
  }
  return d_seq;
}

template <typename Params>
void AppendCell(const std::string& prefix, Params& p, const char* const* gates,
                std::size_t count,
                std::vector<std::pair<std::string, Tensor*>>& out) {
  for (std::size_t g = 0; g < count; ++g) {
    out.emplace_back(prefix + ".W_" + gates[g], &p.input_weights[g]);
    out.emplace_back(prefix + ".U_" + gates[g], &p.recurrent_weights[g]);
    out.emplace_back(prefix + ".b_" + gates[g], &p.biases[g]);
  }
}

constexpr const char* kLstmGateNames[] = {"i", "f", "g", "o"};
constexpr const char* kGruGateNames[] = {"z", "r", "h"};

}  // namespace

int ModelConfig::ShortWidth() const {
  if (!has_short()) return 0;
  return stream_output == StreamOutput::kLastState
             ? gru_units
             : gru_units * PooledTimesteps();
}

int ModelConfig::LongWidth() const {
  if (!has_long()) return 0;
  return stream_output == StreamOutput::kLastState
             ? lstm_units
             : lstm_units * PooledTimesteps();
}

void ModelConfig::Validate() const {
  Require(input_timesteps > 0, "input_timesteps must be positive");
  Require(input_channels > 0, "input_channels must be positive");
  Require(conv_filters > 0, "conv_filters must be positive");
  Require(conv_kernel > 0, "conv_kernel must be positive");
  Require(conv_kernel <= input_timesteps,
          "conv_kernel exceeds input_timesteps");
  Require(pool_size > 0, "pool_size must be positive");
  Require(pool_size <= ConvTimesteps(),
          "pool_size exceeds the convolved sequence length");
  Require(dropout_stream >= 0.0 && dropout_stream < 1.0,
          "dropout_stream must lie in [0, 1)");
  Require(dropout_head >= 0.0 && dropout_head < 1.0,
          "dropout_head must lie in [0, 1)");
  Require(lstm_units > 0, "lstm_units must be positive");
  Require(gru_units > 0, "gru_units must be positive");
  for (int size : dense_sizes) Require(size > 0, "dense sizes must be positive");
  Require(num_classes >= 2, "num_classes must be at least 2");
}

ModelParams ZerosLike(const ModelParams& p) {
  ModelParams z;
  if (p.short_stream) {
    z.short_stream =
        ShortStreamParams{ZerosLike(p.short_stream->conv), ZerosLike(p.short_stream->gru)};
  }
  if (p.long_stream) {
    z.long_stream =
        LongStreamParams{ZerosLike(p.long_stream->conv), ZerosLike(p.long_stream->lstm)};
  }
  for (const DenseParams& d : p.head) z.head.push_back(ZerosLike(d));
  return z;
}

std::vector<std::pair<std::string, Tensor*>> NamedTensors(ModelParams& p) {
  std::vector<std::pair<std::string, Tensor*>> out;
  if (p.short_stream) {
    out.emplace_back("short.conv.kernel", &p.short_stream->conv.kernel);
    out.emplace_back("short.conv.bias", &p.short_stream->conv.bias);
    AppendCell("short.gru", p.short_stream->gru, kGruGateNames, 3, out);
  }
  if (p.long_stream) {
    out.emplace_back("long.conv.kernel", &p.long_stream->conv.kernel);
    out.emplace_back("long.conv.bias", &p.long_stream->conv.bias);
    AppendCell("long.lstm", p.long_stream->lstm, kLstmGateNames, 4, out);
  }
  for (std::size_t l = 0; l < p.head.size(); ++l) {
    const std::string name = l + 1 == p.head.size()
                                 ? std::string("head.output")
                                 : "head.dense" + std::to_string(l);
    out.emplace_back(name + ".weight", &p.head[l].weight);
    out.emplace_back(name + ".bias", &p.head[l].bias);
  }
  return out;
}

std::vector<std::pair<std::string, const Tensor*>> NamedTensors(
    const ModelParams& p) {
  auto named = NamedTensors(const_cast<ModelParams&>(p));
  return {named.begin(), named.end()};
}

TemporalAugmenterModel::TemporalAugmenterModel(ModelConfig config,
                                               ModelParams params)
    : config_(std::move(config)), params_(std::move(params)) {
  config_.Validate();
  if (config_.has_short() != params_.short_stream.has_value() ||
      config_.has_long() != params_.long_stream.has_value() ||
      params_.head.size() != config_.dense_sizes.size() + 1) {
    throw ConfigError("model parameters do not match the model config");
  }
}

TemporalAugmenterModel Build(const ModelConfig& config, Rng& rng) {
  config.Validate();
  ModelParams p;
  if (config.has_short()) {
    Conv1DParams conv = MakeConv(config, rng);
    p.short_stream = ShortStreamParams{
        std::move(conv), MakeGruParams(config.conv_filters, config.gru_units, rng)};
  }
  if (config.has_long()) {
    Conv1DParams conv = MakeConv(config, rng);
    p.long_stream = LongStreamParams{
        std::move(conv),
        MakeLstmParams(config.conv_filters, config.lstm_units, rng)};
  }
  int in = config.ConcatWidth();
  for (int size : config.dense_sizes) {
    p.head.push_back(MakeDense(in, size, rng));
    in = size;
  }
  p.head.push_back(MakeDense(in, config.num_classes, rng));
  return TemporalAugmenterModel(config, std::move(p));
}

TemporalAugmenterModel Build(const ModelConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  return Build(config, rng);
}

ForwardResult Forward(const TemporalAugmenterModel& model, const Tensor& x,
                      Mode mode, Rng* rng, ForwardTrace* trace) {
  const ModelConfig& c = model.config();
  const ModelParams& p = model.params();
  const Tensor::Shape expected{x.rank() == 3 ? x.dim(0) : 0,
                               static_cast<std::size_t>(c.input_timesteps),
                               static_cast<std::size_t>(c.input_channels)};
  if (x.shape() != expected || x.dim(0) == 0) {
    throw DimensionError("forward: input " + x.ShapeString() +
                         " does not match model input [n x " +
                         std::to_string(c.input_timesteps) + " x " +
                         std::to_string(c.input_channels) + "]");
  }
  if (mode == Mode::kTrain && !rng &&
      (c.dropout_stream > 0.0 || c.dropout_head > 0.0)) {
    throw std::invalid_argument("forward: train mode with dropout needs an Rng");
  }
  const std::size_t n = x.dim(0);
  if (trace) {
    *trace = ForwardTrace{};
    trace->model = &model;
    trace->batch = n;
  }

  std::vector<Tensor> parts;
  if (p.short_stream) {
    StreamTrace* st = trace ? &trace->short_stream : nullptr;
    Tensor front = StreamFrontForward(c, p.short_stream->conv, x, mode, rng, st);
    RecurrentOutput out =
        GruForward(front, p.short_stream->gru, st ? &st->gru : nullptr);
    if (st) {
      st->timesteps = front.dim(1);
      st->units = p.short_stream->gru.units();
    }
    parts.push_back(StreamFeatures(out, c.stream_output));
  }
  if (p.long_stream) {
    StreamTrace* st = trace ? &trace->long_stream : nullptr;
    Tensor front = StreamFrontForward(c, p.long_stream->conv, x, mode, rng, st);
    RecurrentOutput out =
        LstmForward(front, p.long_stream->lstm, st ? &st->lstm : nullptr);
    if (st) {
      st->timesteps = front.dim(1);
      st->units = p.long_stream->lstm.units();
    }
    parts.push_back(StreamFeatures(out, c.stream_output));
  }

  // Short-stream features first, then long-stream features.
  std::size_t width = 0;
  for (const Tensor& part : parts) width += part.dim(1);
  Tensor h({n, width});
  for (std::size_t i = 0, offset = 0; i < n; ++i, offset = 0) {
    for (const Tensor& part : parts) {
      for (std::size_t j = 0; j < part.dim(1); ++j) {
        h.at(i, offset + j) = part.at(i, j);
      }
      offset += part.dim(1);
    }
  }

  if (trace) {
    trace->dense.resize(p.head.size());
    trace->dense_activation.resize(p.head.size() - 1);
  }
  for (std::size_t l = 0; l + 1 < p.head.size(); ++l) {
    h = DenseForward(h, p.head[l], trace ? &trace->dense[l] : nullptr);
    h = ActivationForward(h, Activation::kRelu,
                          trace ? &trace->dense_activation[l] : nullptr);
    if (l == 0) {
      h = DropoutForward(h, c.dropout_head, mode, rng,
                         trace ? &trace->head_dropout : nullptr);
    }
  }
  Tensor logits =
      DenseForward(h, p.head.back(), trace ? &trace->dense.back() : nullptr);
  ForwardResult result{Softmax(logits), logits};
  if (trace) trace->logits = std::move(logits);
  return result;
}

ModelParams Backward(const TemporalAugmenterModel& model, ForwardTrace& trace,
                     const Tensor& d_logits) {
  if (trace.model != &model) {
    throw std::logic_error("backward: trace was not recorded for this model");
  }
  if (trace.consumed) throw std::logic_error("backward: trace already consumed");
  trace.consumed = true;
  CheckSameShape(d_logits, trace.logits, "backward logits");

  const ModelConfig& c = model.config();
  const ModelParams& p = model.params();
  ModelParams grads = ZerosLike(p);
  const std::size_t n = trace.batch;

  Tensor d = DenseBackward(d_logits, p.head.back(), trace.dense.back(),
                           grads.head.back());
  for (std::size_t l = p.head.size() - 1; l-- > 0;) {
    if (l == 0) d = DropoutBackward(d, trace.head_dropout);
    d = ActivationBackward(d, Activation::kRelu, trace.dense_activation[l]);
    d = DenseBackward(d, p.head[l], trace.dense[l], grads.head[l]);
  }

  // Split the concat gradient back into the per-stream slices.
  std::size_t offset = 0;
  auto slice = [&](std::size_t width) {
    Tensor part({n, width});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < width; ++j) {
        part.at(i, j) = d.at(i, offset + j);
      }
    }
    offset += width;
    return part;
  };
  if (p.short_stream) {
    const StreamTrace& st = trace.short_stream;
    Tensor d_seq = SequenceGradient(slice(c.ShortWidth()), n, st.timesteps,
                                    st.units, c.stream_output);
    Tensor d_front =
        GruBackward(d_seq, p.short_stream->gru, st.gru, grads.short_stream->gru);
    StreamFrontBackward(c, p.short_stream->conv, st, std::move(d_front),
                        grads.short_stream->conv);
  }
  if (p.long_stream) {
    const StreamTrace& st = trace.long_stream;
    Tensor d_seq = SequenceGradient(slice(c.LongWidth()), n, st.timesteps,
                                    st.units, c.stream_output);
    Tensor d_front = LstmBackward(d_seq, p.long_stream->lstm, st.lstm,
                                  grads.long_stream->lstm);
    StreamFrontBackward(c, p.long_stream->conv, st, std::move(d_front),
                        grads.long_stream->conv);
  }
  return grads;
}

std::size_t ParamCount(const TemporalAugmenterModel& model) {
  std::size_t total = 0;
  for (const auto& [name, t] : NamedTensors(model.params())) total += t->size();
  return total;
}

std::size_t ClosedFormParamCount(const ModelConfig& c) {
  const std::size_t k = c.conv_kernel, d = c.input_channels, f = c.conv_filters;
  const std::size_t conv = k * d * f + f;
  std::size_t total = 0;
  if (c.has_short()) {
    const std::size_t u = c.gru_units;
    total += conv + 3 * (f * u + u * u + u);
  }
  if (c.has_long()) {
    const std::size_t u = c.lstm_units;
    total += conv + 4 * (f * u + u * u + u);
  }
  std::size_t in = c.ConcatWidth();
  for (int size : c.dense_sizes) {
    total += in * size + size;
    in = size;
  }
  total += in * c.num_classes + c.num_classes;
  return total;
}

}  // namespace ta
