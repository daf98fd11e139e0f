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

#ifndef TEMPORAL_AUGMENTER_MODEL_H_
#define TEMPORAL_AUGMENTER_MODEL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "temporal_augmenter/layers.h"
#include "temporal_augmenter/recurrent.h"
#include "temporal_augmenter/rng.h"
#include "temporal_augmenter/tensor.h"

namespace ta {

// What a stream hands to the concatenation.
enum class StreamOutput {
  kLastState,  // final hidden state, [n x u]
  kSequence,   // every hidden state flattened, [n x T'' * u]
};

// Which streams are instantiated. Single-stream variants are ablations.
enum class StreamSet { kBoth, kLongOnly, kShortOnly };

struct ModelConfig {
  int input_timesteps = 0;
  int input_channels = 1;
  int conv_filters = 128;
  int conv_kernel = 1;
  int pool_size = 2;
  double dropout_stream = 0.0;  // after max pooling, in both streams
  double dropout_head = 0.0;    // after the first dense layer
  int lstm_units = 10;
  int gru_units = 10;
  std::vector<int> dense_sizes{64, 32};
  int num_classes = 2;
  Activation conv_activation = Activation::kRelu;
  StreamOutput stream_output = StreamOutput::kLastState;
  StreamSet streams = StreamSet::kBoth;

  // Throws ConfigError naming the offending field.
  void Validate() const;

  bool has_short() const { return streams != StreamSet::kLongOnly; }
  bool has_long() const { return streams != StreamSet::kShortOnly; }
  int ConvTimesteps() const { return input_timesteps - conv_kernel + 1; }
  int PooledTimesteps() const { return ConvTimesteps() / pool_size; }
  int ShortWidth() const;
  int LongWidth() const;
  int ConcatWidth() const { return ShortWidth() + LongWidth(); }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Short-term stream: conv -> activation -> max pool -> dropout -> GRU.
struct ShortStreamParams {
  Conv1DParams conv;
  GruParams gru;
};

// Long-term stream: conv -> activation -> max pool -> dropout -> LSTM.
struct LongStreamParams {
  Conv1DParams conv;
  LstmParams lstm;
};

// Also used as the gradient container: gradients have exactly these shapes.
struct ModelParams {
  std::optional<ShortStreamParams> short_stream;
  std::optional<LongStreamParams> long_stream;
  // Hidden dense layers followed by the output layer.
  std::vector<DenseParams> head;
};

ModelParams ZerosLike(const ModelParams& p);

// Stable, ordered names for every parameter tensor.
std::vector<std::pair<std::string, Tensor*>> NamedTensors(ModelParams& p);
std::vector<std::pair<std::string, const Tensor*>> NamedTensors(
    const ModelParams& p);

class TemporalAugmenterModel {
 public:
  TemporalAugmenterModel(ModelConfig config, ModelParams params);

  const ModelConfig& config() const { return config_; }
  const ModelParams& params() const { return params_; }
  ModelParams& mutable_params() { return params_; }

 private:
  ModelConfig config_;
  ModelParams params_;
};

// Glorot-uniform dense and recurrent input kernels, he-uniform conv kernels,
// orthogonal recurrent kernels, zero biases.
TemporalAugmenterModel Build(const ModelConfig& config, Rng& rng);
TemporalAugmenterModel Build(const ModelConfig& config, std::uint64_t seed);

struct StreamTrace {
  Conv1DCache conv;
  ActivationCache activation;
  MaxPoolCache pool;
  DropoutCache dropout;
  LstmCache lstm;
  GruCache gru;
  std::size_t timesteps = 0;
  std::size_t units = 0;
};

struct ForwardTrace {
  const TemporalAugmenterModel* model = nullptr;
  bool consumed = false;
  std::size_t batch = 0;
  StreamTrace short_stream;
  StreamTrace long_stream;
  std::vector<DenseCache> dense;
  std::vector<ActivationCache> dense_activation;
  DropoutCache head_dropout;
  Tensor logits;
};

struct ForwardResult {
  Tensor probs;   // [n x k], rows sum to 1
  Tensor logits;  // [n x k]
};

// Eval mode never touches the generator (rng may be null).
// When trace is non-null it receives the caches for one Backward call.
ForwardResult Forward(const TemporalAugmenterModel& model, const Tensor& x,
                      Mode mode, Rng* rng, ForwardTrace* trace = nullptr);

// Gradient of the loss with respect to every parameter, given dL/dlogits.
// The trace is consumed; a second call with it throws std::logic_error.
ModelParams Backward(const TemporalAugmenterModel& model, ForwardTrace& trace,
                     const Tensor& d_logits);

// Exact count over all instantiated parameter tensors.
std::size_t ParamCount(const TemporalAugmenterModel& model);
// The same total from layer sizes alone.
std::size_t ClosedFormParamCount(const ModelConfig& config);

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_MODEL_H_
