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

#include "dsds/neural/optimizer.h"

#include <cmath>

#include "dsds/common/status.h"
#include "dsds/kernels/kernels.h"

namespace dsds::neural {

SgdOptimizer::SgdOptimizer(SgdConfig config) : config_(config) {
  if (!(config_.learning_rate > 0.0)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (config_.momentum < 0.0 || config_.momentum >= 1.0) {
    throw InvalidArgument("momentum must be in [0, 1)");
  }
}

double SgdOptimizer::step(std::span<Parameter* const> params) {
  const auto& k = kernels::active();
  double sq = 0.0;
  for (Parameter* p : params) {
    if (p->frozen() || !p->has_grad()) continue;
    if (p->sparse()) {
      for (size_t r : p->touched_rows()) {
        const double* g = p->grad().row(r).data();
        sq += k.dot(g, g, p->grad().cols());
      }
    } else {
      sq += k.dot(p->grad().data(), p->grad().data(), p->grad().size());
    }
  }
  const double norm = std::sqrt(sq);
  double scale = 1.0;
  if (config_.clip_norm > 0.0 && norm > config_.clip_norm) {
    scale = config_.clip_norm / norm;
  }
  const double step = -config_.learning_rate * scale;

  for (Parameter* p : params) {
    if (p->frozen() || !p->has_grad()) {
      p->zero_grad();
      continue;
    }
    Tensor* vel = nullptr;
    if (config_.momentum > 0.0) {
      auto it = velocity_.find(p->name());
      if (it == velocity_.end()) {
        it = velocity_.emplace(p->name(), Tensor(p->value().shape())).first;
      } else if (it->second.shape() != p->value().shape()) {
        throw InvalidArgument("optimizer state shape mismatch for '" +
                              p->name() + "'");
      }
      vel = &it->second;
    }
    auto update = [&](double* value, double* grad, double* v, size_t n) {
      if (v == nullptr) {
        k.axpy(step, grad, value, n);
        return;
      }
      for (size_t i = 0; i < n; ++i) {
        v[i] = config_.momentum * v[i] + step * grad[i];
        value[i] += v[i];
      }
    };
    if (p->sparse()) {
      const size_t cols = p->value().cols();
      for (size_t r : p->touched_rows()) {
        update(p->value().row(r).data(), p->grad().row(r).data(),
               vel ? vel->row(r).data() : nullptr, cols);
      }
    } else {
      update(p->value().data(), p->grad().data(), vel ? vel->data() : nullptr,
             p->value().size());
    }
    p->zero_grad();
  }
  return norm;
}

}  // namespace dsds::neural
