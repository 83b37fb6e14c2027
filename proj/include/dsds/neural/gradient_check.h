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

#ifndef DSDS_NEURAL_GRADIENT_CHECK_H_
#define DSDS_NEURAL_GRADIENT_CHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "dsds/neural/graph.h"
#include "dsds/neural/tensor.h"

namespace dsds::neural {

// Builds the scalar loss on a fresh graph. Must be deterministic.
using LossBuilder = std::function<Var(Graph&)>;

struct GradientCheckOptions {
  double epsilon = 1e-4;
  // 0 checks every coordinate; otherwise a seeded uniform subset of this size.
  size_t max_coordinates = 0;
  uint64_t seed = 0;
  // Denominator floor: rel = |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
};

struct GradientCheckResult {
  double max_relative_error = 0.0;
  size_t coordinates_checked = 0;
  std::string worst_parameter;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares backward() gradients with central differences
// (L(w + e) - L(w - e)) / 2e for every non-frozen parameter coordinate.
// Throws InvalidArgument when epsilon <= 0. Parameter values are restored.
GradientCheckResult gradient_check(std::span<Parameter* const> params,
                                   const LossBuilder& loss,
                                   const GradientCheckOptions& options = {});

}  // namespace dsds::neural

#endif  // DSDS_NEURAL_GRADIENT_CHECK_H_
