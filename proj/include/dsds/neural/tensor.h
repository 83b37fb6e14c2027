/* Copyright 2026 The DsDs Tagger Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DSDS_NEURAL_TENSOR_H_
#define DSDS_NEURAL_TENSOR_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsds::neural {

// Dense row-major float64 tensor of rank 1 or 2.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, double fill = 0.0);
  Tensor(std::vector<size_t> shape, std::vector<double> values);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t size() const { return values_.size(); }
  size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  size_t cols() const { return shape_.size() == 2 ? shape_[1] : 1; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> row(size_t r) { return values().subspan(r * cols(), cols()); }
  std::span<const double> row(size_t r) const {
    return values().subspan(r * cols(), cols());
  }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](size_t i) { return values_[i]; }
  double operator[](size_t i) const { return values_[i]; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<size_t> shape_;
  std::vector<double> values_;
};

enum class InitScheme {
  kZeros,
  // U(-r, r), r = sqrt(6 / (fan_in + fan_out)); fan_in = cols, fan_out = rows.
  kGlorotUniform,
  // U(-r, r), r = sqrt(3 / cols); for lookup tables, independent of row count.
  kLookupUniform,
};

// Deterministic in (shape, seed, scheme).
Tensor seeded_init(std::vector<size_t> shape, uint64_t seed, InitScheme scheme);
double init_bound(const std::vector<size_t>& shape, InitScheme scheme);

// A trainable tensor with its gradient accumulator. Lookup tables are
// marked sparse: only rows touched since the last update carry gradient.
class Parameter {
 public:
  Parameter(std::string name, Tensor value, bool sparse_rows);

  const std::string& name() const { return name_; }
  Tensor& value() { return value_; }
  const Tensor& value() const { return value_; }
  Tensor& grad() { return grad_; }
  const Tensor& grad() const { return grad_; }

  bool frozen() const { return frozen_; }
  void set_frozen(bool frozen) { frozen_ = frozen; }
  bool sparse() const { return sparse_; }

  // Rows carrying gradient (all rows when dense and non-zero).
  void touch_row(size_t r);
  const std::vector<size_t>& touched_rows() const { return touched_; }
  bool has_grad() const { return dense_dirty_ || !touched_.empty(); }
  void mark_dense_dirty() { dense_dirty_ = true; }
  void zero_grad();

 private:
  std::string name_;
  Tensor value_;
  Tensor grad_;
  bool frozen_ = false;
  bool sparse_;
  bool dense_dirty_ = false;
  std::vector<size_t> touched_;
  std::vector<uint8_t> touched_flag_;
};

// Owns parameters; iteration order is insertion order.
class ParameterStore {
 public:
  Parameter& add(std::string name, Tensor value, bool sparse_rows = false);
  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  size_t size() const { return params_.size(); }
  Parameter& operator[](size_t i) { return *params_[i]; }
  const Parameter& operator[](size_t i) const { return *params_[i]; }
  std::vector<Parameter*> all();
  void zero_grad();
  // Total number of scalar values.
  size_t num_values() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

}  // namespace dsds::neural

#endif  // DSDS_NEURAL_TENSOR_H_
