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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "adasamp/kernels.hpp"
#include "kernels_impl.hpp"

namespace adasamp::kernels {

namespace {

const Table kScalar{Isa::scalar,          scalar::divide, scalar::widen,     scalar::scale,
                    scalar::dot,          scalar::sum_squares, scalar::sparse_dot};

#if defined(ADASAMP_HAVE_AVX2)
const Table kAvx2{Isa::avx2,        avx2::divide,      avx2::widen,     avx2::scale,
                  avx2::dot,        avx2::sum_squares, avx2::sparse_dot};
#endif

const Table* initial_table() {
  const Table* avx = avx2_table();
  if (const char* env = std::getenv("ADASAMP_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar") return &kScalar;
    if (want == "avx2" && avx != nullptr) return avx;
  }
  return avx != nullptr ? avx : &kScalar;
}

std::atomic<const Table*>& slot() {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const Table& scalar_table() { return kScalar; }

const Table* avx2_table() {
#if defined(ADASAMP_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() { return *slot().load(std::memory_order_relaxed); }

bool select(Isa isa) {
  const Table* t = isa == Isa::scalar ? &kScalar : avx2_table();
  if (t == nullptr) return false;
  slot().store(t, std::memory_order_relaxed);
  return true;
}

void divide(std::span<const double> num, std::span<const double> den, std::span<double> out) {
  active().divide(num.data(), den.data(), out.data(), out.size());
}

void widen(std::span<double> lo, std::span<double> hi, std::span<const double> norms,
           double scale, double guard) {
  active().widen(lo.data(), hi.data(), norms.data(), scale, guard, lo.size());
}

void scale(std::span<const double> x, double s, std::span<double> out) {
  active().scale(x.data(), s, out.data(), out.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

double sparse_dot(std::span<const double> vals, std::span<const std::uint32_t> idx,
                  std::span<const double> x) {
  return active().sparse_dot(vals.data(), idx.data(), vals.size(), x.data());
}

}  // namespace adasamp::kernels
