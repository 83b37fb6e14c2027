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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "dsds/common/status.h"
#include "dsds/kernels/kernels.h"

namespace dsds::kernels {
namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("DSDS_KERNELS")) {
    const std::string choice(env);
    if (choice == "scalar") return Backend::kScalar;
    if (choice == "avx2" && avx2_table() != nullptr) return Backend::kAvx2;
  }
  return avx2_table() != nullptr ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{
      initial_backend() == Backend::kAvx2 ? avx2_table() : &scalar_table()};
  return slot;
}

}  // namespace

bool backend_available(Backend backend) {
  return backend == Backend::kScalar || avx2_table() != nullptr;
}

Backend active_backend() {
  return active_slot().load() == &scalar_table() ? Backend::kScalar
                                                 : Backend::kAvx2;
}

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw InvalidArgument("kernel backend not available: " +
                          std::string(backend_name(backend)));
  }
  active_slot().store(backend == Backend::kScalar ? &scalar_table()
                                                  : avx2_table());
}

std::string_view backend_name(Backend backend) {
  return backend == Backend::kScalar ? "scalar" : "avx2";
}

const KernelTable& active() { return *active_slot().load(); }

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  double aa = 0.0, bb = 0.0;
  const double ab = active().dot_norms(a.data(), b.data(), a.size(), &aa, &bb);
  if (aa == 0.0 || bb == 0.0) return 1.0;
  double cos = ab / std::sqrt(aa * bb);
  if (cos > 1.0) cos = 1.0;
  if (cos < -1.0) cos = -1.0;
  return 1.0 - cos;
}

}  // namespace dsds::kernels
