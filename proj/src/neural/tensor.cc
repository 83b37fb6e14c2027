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

#include "dsds/neural/tensor.h"

#include <cmath>
#include <functional>
#include <numeric>

#include "dsds/common/random.h"
#include "dsds/common/status.h"

namespace dsds::neural {
namespace {

size_t product(const std::vector<size_t>& shape) {
  if (shape.empty() || shape.size() > 2) {
    throw InvalidArgument("tensor rank must be 1 or 2");
  }
  size_t n = 1;
  for (size_t d : shape) {
    if (d == 0) throw InvalidArgument("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<size_t> shape, double fill)
    : shape_(std::move(shape)), values_(product(shape_), fill) {}

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != product(shape_)) {
    throw InvalidArgument("value count does not match tensor shape");
  }
}

double init_bound(const std::vector<size_t>& shape, InitScheme scheme) {
  const double rows = static_cast<double>(shape.empty() ? 1 : shape[0]);
  const double cols = static_cast<double>(shape.size() == 2 ? shape[1] : 1);
  switch (scheme) {
    case InitScheme::kZeros:
      return 0.0;
    case InitScheme::kGlorotUniform:
      return std::sqrt(6.0 / (cols + rows));
    case InitScheme::kLookupUniform:
      return std::sqrt(3.0 / (shape.size() == 2 ? cols : rows));
  }
  return 0.0;
}

Tensor seeded_init(std::vector<size_t> shape, uint64_t seed, InitScheme scheme) {
  Tensor t(std::move(shape));
  if (scheme == InitScheme::kZeros) return t;
  const double r = init_bound(t.shape(), scheme);
  Rng rng(seed);
  for (double& v : t.values()) v = uniform(rng, -r, r);
  return t;
}

Parameter::Parameter(std::string name, Tensor value, bool sparse_rows)
    : name_(std::move(name)),
      value_(std::move(value)),
      grad_(value_.shape()),
      sparse_(sparse_rows),
      touched_flag_(sparse_rows ? value_.rows() : 0, 0) {}

void Parameter::touch_row(size_t r) {
  if (!sparse_) {
    dense_dirty_ = true;
    return;
  }
  if (!touched_flag_[r]) {
    touched_flag_[r] = 1;
    touched_.push_back(r);
  }
}

void Parameter::zero_grad() {
  if (sparse_) {
    for (size_t r : touched_) {
      auto row = grad_.row(r);
      std::fill(row.begin(), row.end(), 0.0);
      touched_flag_[r] = 0;
    }
    touched_.clear();
  } else if (dense_dirty_) {
    std::fill(grad_.values().begin(), grad_.values().end(), 0.0);
  }
  dense_dirty_ = false;
}

Parameter& ParameterStore::add(std::string name, Tensor value, bool sparse_rows) {
  if (find(name) != nullptr) {
    throw InvalidArgument("duplicate parameter name '" + name + "'");
  }
  params_.push_back(
      std::make_unique<Parameter>(std::move(name), std::move(value), sparse_rows));
  return *params_.back();
}

Parameter* ParameterStore::find(std::string_view name) {
  for (auto& p : params_) {
    if (p->name() == name) return p.get();
  }
  return nullptr;
}

const Parameter* ParameterStore::find(std::string_view name) const {
  for (const auto& p : params_) {
    if (p->name() == name) return p.get();
  }
  return nullptr;
}

std::vector<Parameter*> ParameterStore::all() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p->zero_grad();
}

size_t ParameterStore::num_values() const {
  size_t n = 0;
  for (const auto& p : params_) n += p->value().size();
  return n;
}

}  // namespace dsds::neural
