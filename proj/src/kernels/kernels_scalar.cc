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

#include "dsds/kernels/kernels.h"

namespace dsds::kernels {
namespace {

double dot_scalar(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_scalar(const double* w, size_t rows, size_t cols, size_t ld,
                 const double* x, double* y) {
  for (size_t r = 0; r < rows; ++r) y[r] += dot_scalar(w + r * ld, x, cols);
}

void gemv_t_scalar(const double* w, size_t rows, size_t cols, size_t ld,
                   const double* g, double* x) {
  for (size_t r = 0; r < rows; ++r) {
    if (g[r] != 0.0) axpy_scalar(g[r], w + r * ld, x, cols);
  }
}

void ger_scalar(const double* g, size_t rows, const double* x, size_t cols,
                size_t ld, double* w) {
  for (size_t r = 0; r < rows; ++r) {
    if (g[r] != 0.0) axpy_scalar(g[r], x, w + r * ld, cols);
  }
}

double dot_norms_scalar(const double* a, const double* b, size_t n,
                        double* aa, double* bb) {
  double ab = 0.0, sa = 0.0, sb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ab += a[i] * b[i];
    sa += a[i] * a[i];
    sb += b[i] * b[i];
  }
  *aa = sa;
  *bb = sb;
  return ab;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{dot_scalar,    axpy_scalar, gemv_scalar,
                                 gemv_t_scalar, ger_scalar,  dot_norms_scalar};
  return table;
}

}  // namespace dsds::kernels
