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

#ifndef TEMPORAL_AUGMENTER_TENSOR_H_
#define TEMPORAL_AUGMENTER_TENSOR_H_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ta {

// Dense row-major array of doubles. The shape is always recorded explicitly
// and product(shape) == data.size() holds for every constructed value.
class Tensor {
 public:
  using Shape = std::vector<std::size_t>;

  // Empty tensor of shape [0].
  Tensor();
  explicit Tensor(Shape shape, double fill = 0.0);
  // Throws DimensionError when the value count does not match the shape.
  Tensor(Shape shape, std::vector<double> values);

  static Tensor Zeros(Shape shape) { return Tensor(std::move(shape), 0.0); }
  // Rank-1 tensor holding the given values.
  static Tensor Vector(std::initializer_list<double> values);
  // Rank-2 tensor from nested rows; all rows must have the same width.
  static Tensor Matrix(std::initializer_list<std::initializer_list<double>> rows);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  const double& operator[](std::size_t i) const { return data_[i]; }

  double& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
  const double& at(std::size_t i, std::size_t j) const {
    return data_[i * shape_[1] + j];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  const double& at(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  // Same values under a new shape with the same element count.
  Tensor Reshaped(Shape shape) const;
  void Fill(double value);

  std::string ShapeString() const;
  bool AllFinite() const;

  // Bitwise equality of shape and values.
  friend bool operator==(const Tensor& a, const Tensor& b);

 private:
  Shape shape_;
  std::vector<double> data_;
};

std::string ShapeToString(const Tensor::Shape& shape);
std::size_t ShapeProduct(const Tensor::Shape& shape);

// Throws DimensionError naming both shapes when they differ.
void CheckSameShape(const Tensor& a, const Tensor& b, const char* what);

Tensor Matmul(const Tensor& a, const Tensor& b);

enum class ElementwiseOp { kAdd, kSub, kMul, kSigmoid, kTanh, kRelu };

// Unary form; kAdd/kSub/kMul require the binary overload.
Tensor Elementwise(ElementwiseOp op, const Tensor& a);
Tensor Elementwise(ElementwiseOp op, const Tensor& a, const Tensor& b);

// Softmax over the last axis, computed with max subtraction.
Tensor Softmax(const Tensor& logits);

// a += scale * b, shapes must agree.
void AddScaledInPlace(Tensor& a, const Tensor& b, double scale = 1.0);

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Raw row-major kernels used by the layers. Every variant accumulates into C.
namespace kernels {

// C[m x n] += A[m x k] * B[k x n]
void GemmNN(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c);
// C[m x n] += A^T * B with A stored [k x m] and B stored [k x n]
void GemmTN(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c);
// C[m x n] += A * B^T with A stored [m x k] and B stored [n x k]
void GemmNT(std::size_t m, std::size_t n, std::size_t k, const double* a,
            const double* b, double* c);

}  // namespace kernels

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_TENSOR_H_
