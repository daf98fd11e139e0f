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

#include "temporal_augmenter/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "temporal_augmenter/errors.h"
#include "parse_util.h"

namespace ta {
namespace {

using internal::ParseDouble;
using internal::ParseInt;

constexpr char kMagic[8] = {'T', 'A', 'U', 'G', 'C', 'K', 'P', 'T'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

const char* ActivationName(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

const char* StreamOutputName(StreamOutput s) {
  return s == StreamOutput::kLastState ? "last" : "sequence";
}

const char* StreamSetName(StreamSet s) {
  switch (s) {
    case StreamSet::kBoth:
      return "both";
    case StreamSet::kLongOnly:
      return "long";
    case StreamSet::kShortOnly:
      return "short";
  }
  return "both";
}

std::string JoinKeyValues(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::map<std::string, std::string> SplitKeyValues(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void U32(std::uint32_t v) { Raw(&v, sizeof v); }
  void U64(std::uint64_t v) { Raw(&v, sizeof v); }
  void String(const std::string& s) {
    U32(static_cast<std::uint32_t>(s.size()));
    Raw(s.data(), s.size());
  }
  void TensorValue(const std::string& name, const Tensor& t) {
    String(name);
    U32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) U64(d);
    Raw(t.data(), t.size() * sizeof(double));
  }
  void Raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}
  std::uint32_t U32() {
    std::uint32_t v;
    Raw(&v, sizeof v);
    return v;
  }
  std::uint64_t U64() {
    std::uint64_t v;
    Raw(&v, sizeof v);
    return v;
  }
  std::string String() {
    std::string s(U32(), '\0');
    Raw(s.data(), s.size());
    return s;
  }
  std::pair<std::string, Tensor> TensorValue() {
    std::string name = String();
    const std::uint32_t rank = U32();
    if (rank > 8) Fail("implausible tensor rank");
    Tensor::Shape shape(rank);
    for (auto& d : shape) d = U64();
    if (ShapeProduct(shape) > (std::size_t{1} << 32)) Fail("implausible tensor size");
    std::vector<double> values(ShapeProduct(shape));
    Raw(values.data(), values.size() * sizeof(double));
    return {std::move(name), Tensor(std::move(shape), std::move(values))};
  }
  void Raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) Fail("truncated file");
  }
  [[noreturn]] void Fail(const std::string& why) {
    throw DataError("checkpoint " + path_ + ": " + why);
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KeyValues ModelConfigEntries(const ModelConfig& c) {
  std::string dense;
  for (std::size_t i = 0; i < c.dense_sizes.size(); ++i) {
    if (i) dense += ",";
    dense += std::to_string(c.dense_sizes[i]);
  }
  return {
      {"model.input_timesteps", std::to_string(c.input_timesteps)},
      {"model.input_channels", std::to_string(c.input_channels)},
      {"model.conv_filters", std::to_string(c.conv_filters)},
      {"model.conv_kernel", std::to_string(c.conv_kernel)},
      {"model.pool_size", std::to_string(c.pool_size)},
      {"model.dropout_stream", FormatDouble(c.dropout_stream)},
      {"model.dropout_head", FormatDouble(c.dropout_head)},
      {"model.lstm_units", std::to_string(c.lstm_units)},
      {"model.gru_units", std::to_string(c.gru_units)},
      {"model.dense_sizes", dense},
      {"model.num_classes", std::to_string(c.num_classes)},
      {"model.conv_activation", ActivationName(c.conv_activation)},
      {"model.stream_output", StreamOutputName(c.stream_output)},
      {"model.streams", StreamSetName(c.streams)},
  };
}

bool SetModelConfigField(ModelConfig& c, const std::string& key,
                         const std::string& value) {
  constexpr std::string_view kPrefix = "model.";
  if (key.compare(0, kPrefix.size(), kPrefix) != 0) return false;
  const std::string field = key.substr(kPrefix.size());
  if (field == "input_timesteps") {
    c.input_timesteps = ParseInt(key, value);
  } else if (field == "input_channels") {
    c.input_channels = ParseInt(key, value);
  } else if (field == "conv_filters") {
    c.conv_filters = ParseInt(key, value);
  } else if (field == "conv_kernel") {
    c.conv_kernel = ParseInt(key, value);
  } else if (field == "pool_size") {
    c.pool_size = ParseInt(key, value);
  } else if (field == "dropout_stream") {
    c.dropout_stream = ParseDouble(key, value);
  } else if (field == "dropout_head") {
    c.dropout_head = ParseDouble(key, value);
  } else if (field == "lstm_units") {
    c.lstm_units = ParseInt(key, value);
  } else if (field == "gru_units") {
    c.gru_units = ParseInt(key, value);
  } else if (field == "dense_sizes") {
    c.dense_sizes.clear();
    for (const std::string& item : internal::SplitList(value)) {
      c.dense_sizes.push_back(ParseInt(key, item));
    }
  } else if (field == "num_classes") {
    c.num_classes = ParseInt(key, value);
  } else if (field == "conv_activation") {
    if (value == "relu") {
      c.conv_activation = Activation::kRelu;
    } else if (value == "identity") {
      c.conv_activation = Activation::kIdentity;
    } else {
      throw ConfigError("config: conv_activation must be relu|identity");
    }
  } else if (field == "stream_output") {
    if (value == "last") {
      c.stream_output = StreamOutput::kLastState;
    } else if (value == "sequence") {
      c.stream_output = StreamOutput::kSequence;
    } else {
      throw ConfigError("config: stream_output must be last|sequence");
    }
  } else if (field == "streams") {
    if (value == "both") {
      c.streams = StreamSet::kBoth;
    } else if (value == "long") {
      c.streams = StreamSet::kLongOnly;
    } else if (value == "short") {
      c.streams = StreamSet::kShortOnly;
    } else {
      throw ConfigError("config: streams must be both|long|short");
    }
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
  return true;
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const TemporalAugmenterModel& model,
                    const std::map<std::string, std::string>& metadata,
                    const std::map<std::string, Tensor>& extras) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  Writer w(out);
  w.Raw(kMagic, sizeof kMagic);
  w.U32(kCheckpointVersion);
  std::map<std::string, std::string> config;
  for (const auto& [k, v] : ModelConfigEntries(model.config())) config[k] = v;
  w.String(JoinKeyValues(config));
  w.String(JoinKeyValues(metadata));
  const auto named = NamedTensors(model.params());
  w.U32(static_cast<std::uint32_t>(named.size() + extras.size()));
  for (const auto& [name, t] : named) w.TensorValue(name, *t);
  for (const auto& [name, t] : extras) w.TensorValue("extra." + name, t);
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  Reader r(in, path.string());
  char magic[sizeof kMagic];
  r.Raw(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) r.Fail("bad magic");
  const std::uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    r.Fail("unsupported version " + std::to_string(version));
  }
  ModelConfig config;
  for (const auto& [k, v] : SplitKeyValues(r.String())) {
    SetModelConfigField(config, k, v);
  }
  auto metadata = SplitKeyValues(r.String());
  const std::uint32_t count = r.U32();
  std::map<std::string, Tensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) tensors.insert(r.TensorValue());

  // Rebuild the parameter structure, then overwrite every tensor by name.
  TemporalAugmenterModel model = Build(config, std::uint64_t{0});
  for (auto& [name, t] : NamedTensors(model.mutable_params())) {
    auto it = tensors.find(name);
    if (it == tensors.end()) r.Fail("missing tensor " + name);
    if (it->second.shape() != t->shape()) {
      r.Fail("tensor " + name + " has shape " + it->second.ShapeString() +
             ", expected " + t->ShapeString());
    }
    *t = std::move(it->second);
    tensors.erase(it);
  }
  std::map<std::string, Tensor> extras;
  for (auto& [name, t] : tensors) {
    if (name.rfind("extra.", 0) != 0) r.Fail("unexpected tensor " + name);
    extras.emplace(name.substr(6), std::move(t));
  }
  return {std::move(model), std::move(metadata), std::move(extras)};
}

}  // namespace ta
