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

#include "kernels_impl.hpp"

namespace adasamp::kernels::scalar {

void divide(const double* num, const double* den, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = num[i] / den[i];
}

void widen(double* lo, double* hi, const double* norms, double scale, double guard,
           std::size_t n) {
  const double grow = 1.0 + guard;
  for (std::size_t i = 0; i < n; ++i) {
    const double delta = norms[i] * scale;
    const double l = lo[i] - delta - guard * hi[i];
    lo[i] = 0.0 < l ? l : 0.0;
    hi[i] = (hi[i] + delta) * grow;
  }
}

void scale(const double* x, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * s;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_squares(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sparse_dot(const double* vals, const std::uint32_t* idx, std::size_t nnz,
                  const double* x) {
  double acc = 0.0;
  for (std::size_t k = 0; k < nnz; ++k) acc += vals[k] * x[idx[k]];
  return acc;
}

}  // namespace adasamp::kernels::scalar
