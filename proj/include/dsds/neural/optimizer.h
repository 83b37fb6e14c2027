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

#ifndef DSDS_NEURAL_OPTIMIZER_H_
#define DSDS_NEURAL_OPTIMIZER_H_

#include <map>
#include <span>
#include <string>

#include "dsds/neural/tensor.h"

namespace dsds::neural {

struct SgdConfig {
  double learning_rate = 0.1;
  // Global L2 norm cap over all trainable gradients; <= 0 disables.
  double clip_norm = 5.0;
  // 0 gives plain SGD. Sparse rows use lazy (touched-rows-only) momentum.
  double momentum = 0.0;
};

// SGD with global-norm clipping. Frozen parameters are never written.
class SgdOptimizer {
 public:
  explicit SgdOptimizer(SgdConfig config = {});

  // Applies and then clears the accumulated gradients. Returns the gradient
  // norm before clipping. Throws InvalidArgument when a momentum buffer
  // does not match its parameter's shape.
  double step(std::span<Parameter* const> params);

  const SgdConfig& config() const { return config_; }
  const std::map<std::string, Tensor>& velocity() const { return velocity_; }

 private:
  SgdConfig config_;
  std::map<std::string, Tensor> velocity_;
};

}  // namespace dsds::neural

#endif  // DSDS_NEURAL_OPTIMIZER_H_
