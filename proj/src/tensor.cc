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

#include "temporal_augmenter/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "temporal_augmenter/errors.h"

namespace ta {

std::size_t ShapeProduct(const Tensor::Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeToString(const Tensor::Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor() : shape_{0} {}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(ShapeProduct(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
  if (ShapeProduct(shape_) != data_.size()) {
    throw DimensionError("tensor shape " + ShapeToString(shape_) +
                         " does not hold " + std::to_string(data_.size()) +
                         " values");
  }
}

Tensor Tensor::Vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::Matrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m ? rows.begin()->size() : 0;
  std::vector<double> values;
  values.reserve(m * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionError("ragged matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor({m, n}, std::move(values));
}

Tensor Tensor::Reshaped(Shape shape) const {
  if (ShapeProduct(shape) != data_.size()) {
    throw DimensionError("cannot reshape " + ShapeString() + " to " +
                         ShapeToString(shape));
  }
  return Tensor(std::move(shape), data_);
}

void Tensor::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

std::string Tensor::ShapeString() const { return ShapeToString(shape_); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool operator==(const Tensor& a, const Tensor& b) {
  if (a.shape_ != b.shape_) return false;
  // Bitwise, so that -0.0 != 0.0 and NaN payloads compare by representation.
  return std::equal(a.data_.begin(), a.data_.end(), b.data_.begin(),
                    [](double x, double y) {
                      return std::memcmp(&x, &y, sizeof(double)) == 0;
                    });
}

void CheckSameShape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(what) + ": shape mismatch " +
                         a.ShapeString() + " vs " + b.ShapeString());
  }
}

namespace kernels {

void GemmNN(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    double* c_row = c + i * n;
    const double* a_row = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double a_ip = a_row[p];
      const double* b_row = b + p * n;
      for (std::size_t j = 0; j < n; ++j) c_row[j] += a_ip * b_row[j];
    }
  }
}

void GemmTN(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* a_row = a + p * m;
    const double* b_row = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double a_pi = a_row[i];
      double* c_row = c + i * n;
      for (std::size_t j = 0; j < n; ++j) c_row[j] += a_pi * b_row[j];
    }
  }
}

void GemmNT(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* a_row = a + i * k;
    double* c_row = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double* b_row = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a_row[p] * b_row[p];
      c_row[j] += acc;
    }
  }
}

}  // namespace kernels

Tensor Matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw DimensionError("matmul: incompatible shapes " + a.ShapeString() +
                         " and " + b.ShapeString());
  }
  Tensor c({a.dim(0), b.dim(1)});
  kernels::GemmNN(a.dim(0), b.dim(1), a.dim(1), a.data(), b.data(), c.data());
  return c;
}

namespace {

double ApplyUnary(ElementwiseOp op, double x) {
  switch (op) {
    case ElementwiseOp::kSigmoid:
      return Sigmoid(x);
    case ElementwiseOp::kTanh:
      return std::tanh(x);
    case ElementwiseOp::kRelu:
      return x <= 0.0 ? 0.0 : x;  // NaN passes through
    default:
      throw std::invalid_argument("elementwise: binary op needs two operands");
  }
}

}  // namespace

Tensor Elementwise(ElementwiseOp op, const Tensor& a) {
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = ApplyUnary(op, a[i]);
  return out;
}

Tensor Elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b) {
  CheckSameShape(a, b, "elementwise");
  Tensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) {
    switch (op) {
      case ElementwiseOp::kAdd:
        out[i] = a[i] + b[i];
        break;
      case ElementwiseOp::kSub:
        out[i] = a[i] - b[i];
        break;
      case ElementwiseOp::kMul:
        out[i] = a[i] * b[i];
        break;
      default:
        throw std::invalid_argument("elementwise: unary op given two operands");
    }
  }
  return out;
}

Tensor Softmax(const Tensor& logits) {
  if (logits.rank() == 0 || logits.shape().back() == 0) {
    throw DimensionError("softmax: empty last axis in " +
                         logits.ShapeString());
  }
  const std::size_t k = logits.shape().back();
  const std::size_t rows = logits.size() / k;
  Tensor out(logits.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = logits.data() + r * k;
    double* o = out.data() + r * k;
    const double max = *std::max_element(in, in + k);
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      o[j] = std::exp(in[j] - max);
      sum += o[j];
    }
    for (std::size_t j = 0; j < k; ++j) o[j] /= sum;
  }
  return out;
}

void AddScaledInPlace(Tensor& a, const Tensor& b, double scale) {
  CheckSameShape(a, b, "add_scaled");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

}  // namespace ta
