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

// Compiled with -mavx2 only. FMA is deliberately not enabled: the element-wise
// kernels must round exactly like the scalar reference.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace adasamp::kernels::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

}  // namespace

void divide(const double* num, const double* den, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(num + i), _mm256_loadu_pd(den + i)));
  }
  for (; i < n; ++i) out[i] = num[i] / den[i];
}

void widen(double* lo, double* hi, const double* norms, double scale, double guard,
           std::size_t n) {
  const double grow = 1.0 + guard;
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d vguard = _mm256_set1_pd(guard);
  const __m256d vgrow = _mm256_set1_pd(grow);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d delta = _mm256_mul_pd(_mm256_loadu_pd(norms + i), vscale);
    const __m256d h = _mm256_loadu_pd(hi + i);
    const __m256d l = _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(lo + i), delta),
                                    _mm256_mul_pd(vguard, h));
    // max_pd returns the second operand for NaN and signed-zero ties, which
    // matches the scalar `0.0 < l ? l : 0.0`.
    _mm256_storeu_pd(lo + i, _mm256_max_pd(l, zero));
    _mm256_storeu_pd(hi + i, _mm256_mul_pd(_mm256_add_pd(h, delta), vgrow));
  }
  for (; i < n; ++i) {
    const double delta = norms[i] * scale;
    const double l = lo[i] - delta - guard * hi[i];
    lo[i] = 0.0 < l ? l : 0.0;
    hi[i] = (hi[i] + delta) * grow;
  }
}

void scale(const double* x, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  }
  for (; i < n; ++i) out[i] = x[i] * s;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1,
                         _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a, a));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(b, b));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(x + i);
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(a, a));
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sparse_dot(const double* vals, const std::uint32_t* idx, std::size_t nnz,
                  const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= nnz; k += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    const __m256d gathered = _mm256_i32gather_pd(x, vi, 8);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(vals + k), gathered));
  }
  double total = horizontal_sum(acc);
  for (; k < nnz; ++k) total += vals[k] * x[idx[k]];
  return total;
}

}  // namespace adasamp::kernels::avx2
