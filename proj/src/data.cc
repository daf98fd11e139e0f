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

#include "temporal_augmenter/data.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "temporal_augmenter/errors.h"
#include "temporal_augmenter/rng.h"

namespace ta {
namespace {

namespace fs = std::filesystem;

constexpr int kMitBihSamples = 187;
constexpr int kIonosphereAttributes = 34;
constexpr int kIonospherePulses = 17;

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool ParseNumber(const std::string& token, double& out) {
  if (token.empty()) return false;
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end == token.c_str() + token.size() && std::isfinite(out);
}

[[noreturn]] void ParseFail(const fs::path& path, std::size_t row,
                            std::size_t column, const std::string& what) {
  throw DataError(path.string() + ": row " + std::to_string(row) +
                  ", column " + std::to_string(column) + ": " + what);
}

std::vector<std::vector<std::string>> ReadCsvRows(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    rows.push_back(SplitCsvLine(line));
  }
  return rows;
}

// Makes a [n x T x d] dataset from flat rows.
Dataset Assemble(std::vector<double> values, std::vector<int> labels,
                 std::vector<std::string> class_names, std::size_t steps,
                 std::size_t channels) {
  Dataset ds;
  const std::size_t n = labels.size();
  ds.features = Tensor({n, steps, channels}, std::move(values));
  ds.labels = std::move(labels);
  ds.class_names = std::move(class_names);
  return ds;
}

}  // namespace

void Dataset::Validate() const {
  if (labels.empty()) throw DataError("dataset is empty");
  if (features.rank() != 3 || features.dim(0) != labels.size()) {
    throw DataError("dataset features " + features.ShapeString() +
                    " do not match " + std::to_string(labels.size()) +
                    " labels");
  }
  const int k = num_classes();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) {
      throw DataError("label " + std::to_string(labels[i]) + " at row " +
                      std::to_string(i) + " is outside [0, " +
                      std::to_string(k) + ")");
    }
  }
  std::set<std::string> unique(class_names.begin(), class_names.end());
  if (unique.size() != class_names.size()) {
    throw DataError("class names are not unique");
  }
}

Tensor GatherRows(const Tensor& features, std::span<const std::size_t> rows) {
  const std::size_t row_size = features.size() / features.dim(0);
  Tensor::Shape shape = features.shape();
  shape[0] = rows.size();
  Tensor out(shape);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy_n(features.data() + rows[r] * row_size, row_size,
                out.data() + r * row_size);
  }
  return out;
}

Dataset Subset(const Dataset& ds, std::span<const std::size_t> rows) {
  Dataset out;
  out.features = GatherRows(ds.features, rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(ds.labels.at(r));
  out.class_names = ds.class_names;
  out.metadata = ds.metadata;
  return out;
}

CsvSchema::Kind ParseSchemaKind(const std::string& name) {
  if (name == "mitbih") return CsvSchema::Kind::kMitBih;
  if (name == "ionosphere") return CsvSchema::Kind::kIonosphere;
  if (name == "generic") return CsvSchema::Kind::kGeneric;
  throw ConfigError("unknown csv schema '" + name +
                    "' (expected mitbih|ionosphere|generic)");
}

Dataset LoadCsvSignals(const fs::path& path, const CsvSchema& schema) {
  auto rows = ReadCsvRows(path);
  std::vector<double> values;
  std::vector<int> labels;

  if (schema.kind == CsvSchema::Kind::kMitBih ||
      schema.kind == CsvSchema::Kind::kIonosphere) {
    const bool mitbih = schema.kind == CsvSchema::Kind::kMitBih;
    const std::size_t features = mitbih ? kMitBihSamples : kIonosphereAttributes;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& fields = rows[r];
      if (fields.size() != features + 1) {
        ParseFail(path, r + 1, fields.size(),
                  "expected " + std::to_string(features + 1) + " fields, got " +
                      std::to_string(fields.size()));
      }
      for (std::size_t c = 0; c < features; ++c) {
        double v;
        if (!ParseNumber(fields[c], v)) {
          ParseFail(path, r + 1, c + 1,
                    "'" + fields[c] + "' is not a finite number");
        }
        values.push_back(v);
      }
      const std::string& token = fields[features];
      if (mitbih) {
        double v;
        if (!ParseNumber(token, v) || v != std::floor(v) || v < 0 || v > 4) {
          ParseFail(path, r + 1, features + 1,
                    "unknown label token '" + token + "'");
        }
        labels.push_back(static_cast<int>(v));
      } else if (token == "b" || token == "g") {
        labels.push_back(token == "g" ? 1 : 0);
      } else {
        ParseFail(path, r + 1, features + 1,
                  "unknown label token '" + token + "'");
      }
    }
    if (labels.empty()) throw DataError(path.string() + ": no data rows");
    Dataset ds = mitbih
                     ? Assemble(std::move(values), std::move(labels),
                                {"N", "S", "V", "F", "Q"}, kMitBihSamples, 1)
                     : Assemble(std::move(values), std::move(labels),
                                {"b", "g"}, kIonospherePulses, 2);
    ds.Validate();
    return ds;
  }

  // Generic: header + named label column; label tokens become classes in
  // sorted order.
  if (rows.size() < 2) throw DataError(path.string() + ": no data rows");
  const auto& header = rows.front();
  const auto label_it =
      std::find(header.begin(), header.end(), schema.label_column);
  if (label_it == header.end()) {
    throw DataError(path.string() + ": label column '" + schema.label_column +
                    "' not in header");
  }
  const std::size_t label_col = label_it - header.begin();
  const std::size_t features = header.size() - 1;
  if (schema.channels < 1 || features % schema.channels != 0) {
    throw ConfigError("generic schema: " + std::to_string(features) +
                      " features are not divisible into " +
                      std::to_string(schema.channels) + " channels");
  }
  std::vector<std::string> tokens;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != header.size()) {
      ParseFail(path, r + 1, fields.size(),
                "expected " + std::to_string(header.size()) + " fields");
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == label_col) continue;
      double v;
      if (!ParseNumber(fields[c], v)) {
        ParseFail(path, r + 1, c + 1,
                  "'" + fields[c] + "' is not a finite number");
      }
      values.push_back(v);
    }
    tokens.push_back(fields[label_col]);
  }
  std::vector<std::string> names(tokens);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& t : tokens) {
    labels.push_back(static_cast<int>(
        std::lower_bound(names.begin(), names.end(), t) - names.begin()));
  }
  Dataset ds = Assemble(std::move(values), std::move(labels), std::move(names),
                        features / schema.channels, schema.channels);
  ds.Validate();
  return ds;
}

namespace {

std::uint32_t ReadLe32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t{p[3]} << 24);
}
std::uint16_t ReadLe16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
void PutLe32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutLe16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}

}  // namespace

WavAudio ReadWav(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open WAV file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) -> DataError {
    return DataError(path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }
  WavAudio audio;
  int format = -1;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::size_t size = ReadLe32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw fail("short fmt chunk");
      format = ReadLe16(chunk + 8);
      audio.channels = ReadLe16(chunk + 10);
      audio.sample_rate = static_cast<int>(ReadLe32(chunk + 12));
      audio.bits_per_sample = ReadLe16(chunk + 22);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = available;
    }
    pos = body + size + (size & 1);
  }
  if (format < 0) throw fail("missing fmt chunk");
  if (format != 1 ||
      (audio.bits_per_sample != 8 && audio.bits_per_sample != 16)) {
    throw fail("unsupported WAV encoding (format " + std::to_string(format) +
               ", " + std::to_string(audio.bits_per_sample) +
               " bits); only 8/16-bit PCM is read");
  }
  if (audio.channels < 1) throw fail("invalid channel count");
  if (!data) throw fail("missing data chunk");

  const std::size_t width = audio.bits_per_sample / 8;
  const std::size_t frames = data_size / (width * audio.channels);
  audio.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double sum = 0.0;
    for (int c = 0; c < audio.channels; ++c) {
      const unsigned char* s = data + (f * audio.channels + c) * width;
      sum += width == 1 ? (static_cast<int>(s[0]) - 128) / 128.0
                        : static_cast<std::int16_t>(ReadLe16(s)) / 32768.0;
    }
    audio.samples[f] = sum / audio.channels;
  }
  return audio;
}

void WriteWavPcm16(const fs::path& path, std::span<const double> samples,
                   int sample_rate, int channels) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(samples.size() * channels * 2);
  std::string out;
  out += "RIFF";
  PutLe32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutLe32(out, 16);
  PutLe16(out, 1);
  PutLe16(out, static_cast<std::uint16_t>(channels));
  PutLe32(out, static_cast<std::uint32_t>(sample_rate));
  PutLe32(out, static_cast<std::uint32_t>(sample_rate * channels * 2));
  PutLe16(out, static_cast<std::uint16_t>(channels * 2));
  PutLe16(out, 16);
  out += "data";
  PutLe32(out, data_bytes);
  for (double v : samples) {
    const double scaled = std::round(std::clamp(v, -1.0, 32767.0 / 32768.0) * 32768.0);
    for (int c = 0; c < channels; ++c) {
      PutLe16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write WAV file " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

Dataset LoadWavDir(const fs::path& root, const WavLoadOptions& options) {
  if (!fs::is_directory(root)) {
    throw DataError("WAV root is not a directory: " + root.string());
  }
  if (options.target_len == 0) throw ConfigError("wav target_len must be > 0");
  const bool frames = options.mode == WavFeatureMode::kFrameEnergy;
  if (frames && (options.frame_len == 0 || options.frame_len > options.target_len)) {
    throw ConfigError("wav frame_len must lie in [1, target_len]");
  }
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) {
    throw DataError("no class subdirectories under " + root.string());
  }

  const std::size_t steps =
      frames ? options.target_len / options.frame_len : options.target_len;
  Dataset ds;
  std::vector<double> values;
  std::set<int> rates;
  for (std::size_t k = 0; k < class_dirs.size(); ++k) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(class_dirs[k])) {
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      if (entry.is_regular_file() && ext == ".wav") files.push_back(entry.path());
    }
    if (files.empty()) {
      throw DataError("class directory has no WAV files: " +
                      class_dirs[k].string());
    }
    std::sort(files.begin(), files.end());
    ds.class_names.push_back(class_dirs[k].filename().string());
    for (const auto& file : files) {
      WavAudio audio = ReadWav(file);
      rates.insert(audio.sample_rate);
      audio.samples.resize(options.target_len, 0.0);
      if (frames) {
        for (std::size_t f = 0; f < steps; ++f) {
          double energy = 0.0;
          for (std::size_t j = 0; j < options.frame_len; ++j) {
            const double s = audio.samples[f * options.frame_len + j];
            energy += s * s;
          }
          values.push_back(energy / options.frame_len);
        }
      } else {
        values.insert(values.end(), audio.samples.begin(), audio.samples.end());
      }
      ds.labels.push_back(static_cast<int>(k));
    }
  }
  ds.features = Tensor({ds.labels.size(), steps, 1}, std::move(values));
  std::string rate_list;
  for (int r : rates) rate_list += (rate_list.empty() ? "" : ",") + std::to_string(r);
  ds.metadata["sample_rate"] = rate_list;
  ds.Validate();
  return ds;
}

ScalerParams FitScaler(const Dataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t width = ds.features.size() / n;
  ScalerParams p{Tensor({width}), Tensor({width})};
  for (std::size_t j = 0; j < width; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += ds.features[i * width + j];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = ds.features[i * width + j] - mean;
      var += d * d;
    }
    const double std = std::sqrt(var / n);
    if (std < 1e-12) {
      p.mean[j] = 0.0;
      p.std[j] = 1.0;
    } else {
      p.mean[j] = mean;
      p.std[j] = std;
    }
  }
  return p;
}

Dataset ApplyScaler(const ScalerParams& params, const Dataset& ds) {
  const std::size_t n = ds.size();
  const std::size_t width = ds.features.size() / n;
  if (params.mean.size() != width) {
    throw DimensionError("scaler fitted on " + std::to_string(params.mean.size()) +
                         " features applied to " + std::to_string(width));
  }
  Dataset out = ds;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      double& v = out.features[i * width + j];
      v = (v - params.mean[j]) / params.std[j];
    }
  }
  return out;
}

SplitResult Split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train > 0 && spec.val > 0 && spec.test > 0) ||
      std::abs(spec.train + spec.val + spec.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be positive and sum to 1");
  }
  Rng rng(spec.seed);
  auto partition = [&](std::vector<std::size_t> rows, SplitResult& out) {
    rng.Shuffle(rows);
    const std::size_t n = rows.size();
    const auto n_val = static_cast<std::size_t>(std::floor(n * spec.val + 1e-9));
    const auto n_test = static_cast<std::size_t>(std::floor(n * spec.test + 1e-9));
    const std::size_t n_train = n - n_val - n_test;
    out.train_rows.insert(out.train_rows.end(), rows.begin(), rows.begin() + n_train);
    out.val_rows.insert(out.val_rows.end(), rows.begin() + n_train,
                        rows.begin() + n_train + n_val);
    out.test_rows.insert(out.test_rows.end(), rows.begin() + n_train + n_val,
                         rows.end());
  };

  SplitResult result;
  if (spec.stratified) {
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
    for (auto& rows : by_class) partition(std::move(rows), result);
    rng.Shuffle(result.train_rows);
    rng.Shuffle(result.val_rows);
    rng.Shuffle(result.test_rows);
  } else {
    std::vector<std::size_t> rows(ds.size());
    std::iota(rows.begin(), rows.end(), 0);
    partition(std::move(rows), result);
  }
  if (result.train_rows.empty() || result.val_rows.empty() ||
      result.test_rows.empty()) {
    throw ConfigError("split of " + std::to_string(ds.size()) +
                      " rows leaves a partition empty");
  }
  result.train = Subset(ds, result.train_rows);
  result.val = Subset(ds, result.val_rows);
  result.test = Subset(ds, result.test_rows);
  return result;
}

std::vector<std::size_t> StratifiedSample(const Dataset& ds, std::size_t count,
                                          std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (count > n) {
    throw ConfigError("cannot sample " + std::to_string(count) + " of " +
                      std::to_string(n) + " rows");
  }
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
  for (std::size_t i = 0; i < n; ++i) by_class[ds.labels[i]].push_back(i);
  // Largest-remainder apportionment of count across classes.
  std::vector<std::size_t> quota(by_class.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    const double exact = static_cast<double>(count) * by_class[k].size() / n;
    quota[k] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[k];
    remainders.emplace_back(-(exact - quota[k]), k);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t r = 0; assigned < count; ++r, ++assigned) {
    ++quota[remainders[r % remainders.size()].second];
  }
  Rng rng(seed);
  std::vector<std::size_t> picked;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    rng.Shuffle(by_class[k]);
    picked.insert(picked.end(), by_class[k].begin(),
                  by_class[k].begin() + std::min(quota[k], by_class[k].size()));
  }
  rng.Shuffle(picked);
  return picked;
}

Tensor OneHot(std::span<const int> labels, int num_classes) {
  Tensor out({labels.size(), static_cast<std::size_t>(num_classes)});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw DataError("one_hot: label " + std::to_string(labels[i]) +
                      " outside [0, " + std::to_string(num_classes) + ")");
    }
    out.at(i, labels[i]) = 1.0;
  }
  return out;
}

}  // namespace ta
