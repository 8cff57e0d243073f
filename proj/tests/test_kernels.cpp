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

#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "adasamp/kernels.hpp"
#include "adasamp/rng.hpp"
#include "test_support.hpp"

namespace adasamp {
namespace {

using testing::uniform_in;

class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {
 protected:
  void SetUp() override {
    simd_ = kernels::avx2_table();
    if (simd_ == nullptr) GTEST_SKIP() << "AVX2 variant unavailable";
  }

  std::vector<double> random_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform_in(rng_, lo, hi);
    return v;
  }

  const kernels::Table* simd_ = nullptr;
  Rng rng_{GetParam() * 7919 + 3};
};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST_P(KernelEquivalence, DivideIsBitIdentical) {
  const std::size_t n = GetParam();
  auto num = random_vector(n, -5.0, 5.0);
  auto den = random_vector(n, 0.01, 3.0);
  if (n > 2) {
    den[1] = 0.0;
    num[2] = 0.0;
  }
  std::vector<double> a(n);
  std::vector<double> b(n);
  kernels::scalar_table().divide(num.data(), den.data(), a.data(), n);
  simd_->divide(num.data(), den.data(), b.data(), n);
  EXPECT_TRUE(bit_equal(a, b));
}

TEST_P(KernelEquivalence, WidenIsBitIdentical) {
  const std::size_t n = GetParam();
  auto lo = random_vector(n, 0.0, 2.0);
  auto hi = lo;
  for (auto& h : hi) h += uniform_in(rng_, 0.0, 1.0);
  if (n > 3) hi[3] = kInf;
  const auto norms = random_vector(n, 0.0, 4.0);
  auto lo_a = lo;
  auto hi_a = hi;
  auto lo_b = lo;
  auto hi_b = hi;
  kernels::scalar_table().widen(lo_a.data(), hi_a.data(), norms.data(), 0.37, 1e-12, n);
  simd_->widen(lo_b.data(), hi_b.data(), norms.data(), 0.37, 1e-12, n);
  EXPECT_TRUE(bit_equal(lo_a, lo_b));
  EXPECT_TRUE(bit_equal(hi_a, hi_b));
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_GE(lo_a[i], 0.0);
    EXPECT_LE(lo_a[i], lo[i]);
    EXPECT_GE(hi_a[i], hi[i]);
  }
}

TEST_P(KernelEquivalence, ScaleIsBitIdentical) {
  const std::size_t n = GetParam();
  const auto x = random_vector(n, -100.0, 100.0);
  std::vector<double> a(n);
  std::vector<double> b(n);
  kernels::scalar_table().scale(x.data(), 1.0 / 3.0, a.data(), n);
  simd_->scale(x.data(), 1.0 / 3.0, b.data(), n);
  EXPECT_TRUE(bit_equal(a, b));
}

TEST_P(KernelEquivalence, ReductionsAgreeToRounding) {
  const std::size_t n = GetParam();
  const auto x = random_vector(n, -1.0, 1.0);
  const auto y = random_vector(n, -1.0, 1.0);
  double abs_sum = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    abs_sum += std::abs(x[i] * y[i]);
    sq += x[i] * x[i];
  }
  const double tol = 4.0 * static_cast<double>(n + 1) * 0x1.0p-53;
  EXPECT_NEAR(kernels::scalar_table().dot(x.data(), y.data(), n), simd_->dot(x.data(), y.data(), n),
              tol * abs_sum);
  EXPECT_NEAR(kernels::scalar_table().sum_squares(x.data(), n), simd_->sum_squares(x.data(), n),
              tol * sq);

  std::vector<std::uint32_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = static_cast<std::uint32_t>((k * 37) % (n + 5));
  const auto dense = random_vector(n + 5, -1.0, 1.0);
  double sabs = 0.0;
  for (std::size_t k = 0; k < n; ++k) sabs += std::abs(x[k] * dense[idx[k]]);
  EXPECT_NEAR(kernels::scalar_table().sparse_dot(x.data(), idx.data(), n, dense.data()),
              simd_->sparse_dot(x.data(), idx.data(), n, dense.data()), tol * sabs);
}

INSTANTIATE_TEST_SUITE_P(Lengths, KernelEquivalence,
                         ::testing::Values(0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 63, 1000, 4099));

TEST(KernelDispatch, SelectAndRestore) {
  const auto original = kernels::active().isa;
  EXPECT_TRUE(kernels::select(kernels::Isa::scalar));
  EXPECT_EQ(kernels::active().isa, kernels::Isa::scalar);
  if (kernels::avx2_table() != nullptr) {
    EXPECT_TRUE(kernels::select(kernels::Isa::avx2));
    EXPECT_EQ(kernels::active().isa, kernels::Isa::avx2);
  } else {
    EXPECT_FALSE(kernels::select(kernels::Isa::avx2));
  }
  kernels::select(original);
  EXPECT_EQ(kernels::isa_name(kernels::Isa::scalar), "scalar");
}

TEST(KernelScalar, WidenFormula) {
  std::vector<double> lo{3.5, 0.1};
  std::vector<double> hi{3.5, kInf};
  const std::vector<double> norms{1.0, 1.0};
  kernels::scalar_table().widen(lo.data(), hi.data(), norms.data(), 0.5, 0.0, 2);
  EXPECT_EQ(lo[0], 3.0);
  EXPECT_EQ(hi[0], 4.0);
  EXPECT_EQ(lo[1], 0.0);
  EXPECT_EQ(hi[1], kInf);
}

}  // namespace
}  // namespace adasamp
