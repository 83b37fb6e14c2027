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

#ifndef DSDS_KERNELS_KERNELS_H_
#define DSDS_KERNELS_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

namespace dsds::kernels {

// Dense float64 inner loops used by the neural core and the analysis code.
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active backend is chosen once at startup from CPUID
// and can be forced with DSDS_KERNELS=scalar|avx2 or set_backend().
//
// The vector backends reassociate sums, so results agree with the scalar
// reference to rounding error, not bitwise. Within one process (and one
// machine) every call sequence is deterministic.

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, size_t n);
  // y[r] += sum_c w[r * ld + c] * x[c] for r < rows, c < cols
  void (*gemv)(const double* w, size_t rows, size_t cols, size_t ld,
               const double* x, double* y);
  // x[c] += sum_r w[r * ld + c] * g[r]
  void (*gemv_t)(const double* w, size_t rows, size_t cols, size_t ld,
                 const double* g, double* x);
  // w[r * ld + c] += g[r] * x[c]
  void (*ger)(const double* g, size_t rows, const double* x, size_t cols,
              size_t ld, double* w);
  // returns dot(a, b) and writes |a|^2, |b|^2
  double (*dot_norms)(const double* a, const double* b, size_t n,
                      double* aa, double* bb);
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();

bool backend_available(Backend backend);
Backend active_backend();
// Throws InvalidArgument when the backend is unavailable.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend);
const KernelTable& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sum_squares(std::span<const double> a) {
  return active().dot(a.data(), a.data(), a.size());
}

// 1 - cos(a, b); 1 when either vector is zero.
double cosine_distance(std::span<const double> a, std::span<const double> b);

}  // namespace dsds::kernels

#endif  // DSDS_KERNELS_KERNELS_H_
