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

#include "dsds/neural/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "dsds/common/random.h"
#include "dsds/common/status.h"

namespace dsds::neural {

GradientCheckResult gradient_check(std::span<Parameter* const> params,
                                   const LossBuilder& loss,
                                   const GradientCheckOptions& options) {
  if (!(options.epsilon > 0.0)) {
    throw InvalidArgument("gradient_check: epsilon must be positive");
  }
  for (Parameter* p : params) p->zero_grad();
  {
    Graph g;
    const Var l = loss(g);
    g.backward(l);
  }

  std::vector<std::pair<Parameter*, size_t>> coords;
  for (Parameter* p : params) {
    if (p->frozen()) continue;
    for (size_t i = 0; i < p->value().size(); ++i) coords.emplace_back(p, i);
  }
  if (options.max_coordinates > 0 && coords.size() > options.max_coordinates) {
    Rng rng(options.seed);
    auto pick = sample_without_replacement(coords.size(),
                                           options.max_coordinates, rng);
    std::sort(pick.begin(), pick.end());
    std::vector<std::pair<Parameter*, size_t>> subset;
    subset.reserve(pick.size());
    for (size_t i : pick) subset.push_back(coords[i]);
    coords = std::move(subset);
  }

  std::vector<double> analytic;
  analytic.reserve(coords.size());
  for (auto [p, i] : coords) analytic.push_back(p->grad()[i]);
  for (Parameter* p : params) p->zero_grad();

  auto evaluate = [&]() {
    Graph g;
    const double v = g.scalar(loss(g));
    return v;
  };

  GradientCheckResult result;
  for (size_t c = 0; c < coords.size(); ++c) {
    auto [p, i] = coords[c];
    const double saved = p->value()[i];
    p->value()[i] = saved + options.epsilon;
    const double up = evaluate();
    p->value()[i] = saved - options.epsilon;
    const double down = evaluate();
    p->value()[i] = saved;
    const double numeric = (up - down) / (2.0 * options.epsilon);
    const double a = analytic[c];
    const double denom =
        std::max({std::abs(a), std::abs(numeric), options.floor});
    const double rel = std::abs(a - numeric) / denom;
    ++result.coordinates_checked;
    if (rel > result.max_relative_error || result.worst_parameter.empty()) {
      if (rel >= result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = p->name();
        result.worst_index = i;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace dsds::neural
