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
#include <span>
#include <string_view>

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2 variant. The active table is picked once at startup from the CPU
// features, and can be pinned with ADASAMP_SIMD=scalar|avx2.
//
// Element-wise kernels (divide, widen, scale) produce bit-identical results
// in every variant. Reductions (dot, sum_squares, sparse_dot) only agree up
// to summation order.
namespace adasamp::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct Table {
  Isa isa;

  // out[i] = num[i] / den[i]
  void (*divide)(const double* num, const double* den, double* out, std::size_t n);

  // lo[i] = max(0, lo[i] - norms[i]*scale - guard*hi[i])
  // hi[i] = (hi[i] + norms[i]*scale) * (1 + guard)
  void (*widen)(double* lo, double* hi, const double* norms, double scale, double guard,
                std::size_t n);

  // out[i] = x[i] * s
  void (*scale)(const double* x, double s, double* out, std::size_t n);

  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);

  // sum_k vals[k] * x[idx[k]]
  double (*sparse_dot)(const double* vals, const std::uint32_t* idx, std::size_t nnz,
                       const double* x);
};

const Table& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const Table* avx2_table();

// The table every library routine dispatches through.
const Table& active();

// Override the runtime choice (tests and benchmarks). Returns false when the
// requested variant is unavailable; the active table is then unchanged.
bool select(Isa isa);

// Thin span wrappers over active().
void divide(std::span<const double> num, std::span<const double> den, std::span<double> out);
void widen(std::span<double> lo, std::span<double> hi, std::span<const double> norms,
           double scale, double guard);
void scale(std::span<const double> x, double s, std::span<double> out);
double dot(std::span<const double> x, std::span<const double> y);
double sum_squares(std::span<const double> x);
double sparse_dot(std::span<const double> vals, std::span<const std::uint32_t> idx,
                  std::span<const double> x);

}  // namespace adasamp::kernels
