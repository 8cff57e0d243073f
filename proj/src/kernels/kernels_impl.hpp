// Copyright 2026 The adasamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>

namespace adasamp::kernels {

#define ADASAMP_KERNEL_DECLS                                                              \
  void divide(const double* num, const double* den, double* out, std::size_t n);          \
  void widen(double* lo, double* hi, const double* norms, double scale, double guard,     \
             std::size_t n);                                                              \
  void scale(const double* x, double s, double* out, std::size_t n);                      \
  double dot(const double* x, const double* y, std::size_t n);                            \
  double sum_squares(const double* x, std::size_t n);                                     \
  double sparse_dot(const double* vals, const std::uint32_t* idx, std::size_t nnz,        \
                    const double* x);

namespace scalar {
ADASAMP_KERNEL_DECLS
}

#if defined(ADASAMP_HAVE_AVX2)
namespace avx2 {
ADASAMP_KERNEL_DECLS
}
#endif

#undef ADASAMP_KERNEL_DECLS

}  // namespace adasamp::kernels
