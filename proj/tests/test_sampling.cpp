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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "adasamp/errors.hpp"
#include "adasamp/oracle.hpp"
#include "adasamp/rng.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp {
namespace {

void expect_vec_near(const std::vector<double>& got, const std::vector<double>& want,
                     double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "i=" << i;
}

TEST(LipschitzProfile, CachesDerivedValues) {
  const LipschitzProfile L({1.0, 4.0, 9.0});
  EXPECT_EQ(L.trace(), 14.0);
  EXPECT_EQ(L.l_min(), 1.0);
  EXPECT_EQ(L.l_max(), 9.0);
  EXPECT_EQ(L.sqrt_l()[2], 3.0);
}

TEST(LipschitzProfile, RejectsBadEntries) {
  EXPECT_THROW(LipschitzProfile(std::vector<double>{}), DimensionError);
  EXPECT_THROW(LipschitzProfile({1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(LipschitzProfile({1.0, -2.0}), InvalidArgument);
  EXPECT_THROW(LipschitzProfile({1.0, kInf}), InvalidArgument);
}

TEST(GradientBox, Invariants) {
  EXPECT_THROW(GradientBox({2.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(GradientBox({-1.0}, {1.0}), InvalidArgument);
  EXPECT_THROW(GradientBox({1.0, 2.0}, {3.0}), DimensionError);
  GradientBox fresh(3);
  EXPECT_FALSE(fresh.bounded());
  EXPECT_EQ(fresh.upper[1], kInf);
  EXPECT_TRUE(GradientBox({1.0}, {2.0}).bounded());
}

TEST(EffectiveValue, ReferenceValues) {
  const LipschitzProfile L({1.0, 1.0});
  const std::vector<double> c{2.0, 2.0};
  EXPECT_DOUBLE_EQ(effective_value(std::vector<double>{1.0 / 3, 2.0 / 3}, c, L), 18.0);
  EXPECT_DOUBLE_EQ(effective_value(std::vector<double>{0.4, 0.6}, c, L), 50.0 / 3.0);
  EXPECT_DOUBLE_EQ(effective_value(std::vector<double>{0.5, 0.5}, c, L), 16.0);
}

TEST(EffectiveValue, ZeroOverZeroIsZero) {
  const LipschitzProfile L({1.0, 1.0});
  EXPECT_EQ(effective_value(std::vector<double>{1.0, 0.0}, std::vector<double>{3.0, 0.0}, L), 9.0);
  EXPECT_THROW(effective_value(std::vector<double>{1.0, 0.0}, std::vector<double>{3.0, 1.0}, L),
               InfiniteValueError);
  EXPECT_THROW(effective_value(std::vector<double>{1.0}, std::vector<double>{3.0, 1.0}, L),
               DimensionError);
}

TEST(FixedSampling, ReferenceValues) {
  const auto s = fixed_li_sampling(LipschitzProfile({1.0, 3.0}));
  expect_vec_near(s.p, {0.25, 0.75}, 0.0);
  EXPECT_EQ(s.alpha, 0.25);
  const auto u = fixed_li_sampling(LipschitzProfile({2.0, 2.0, 2.0, 2.0}));
  expect_vec_near(u.p, {0.25, 0.25, 0.25, 0.25}, 0.0);
  EXPECT_EQ(u.alpha, 1.0 / 8.0);
  const auto one = fixed_li_sampling(LipschitzProfile({2.0}));
  EXPECT_EQ(one.p[0], 1.0);
  EXPECT_EQ(one.alpha, 0.5);
}

TEST(OptimalSampling, ReferenceValues) {
  const LipschitzProfile L({1.0, 1.0});
  const auto s = optimal_sampling(std::vector<double>{3.0, 4.0}, L);
  expect_vec_near(s.p, {3.0 / 7.0, 4.0 / 7.0}, 1e-15);
  EXPECT_NEAR(s.alpha, 25.0 / 49.0, 1e-15);
  const auto point = optimal_sampling(std::vector<double>{1.0, 0.0}, L);
  expect_vec_near(point.p, {1.0, 0.0}, 0.0);
  EXPECT_EQ(point.alpha, 1.0);
  const auto flat = optimal_sampling(std::vector<double>{1.0, 1.0, 1.0}, LipschitzProfile({5.0, 5.0, 5.0}));
  expect_vec_near(flat.p, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-15);
  EXPECT_NEAR(flat.alpha, 1.0 / 15.0, 1e-15);
  EXPECT_THROW(optimal_sampling(std::vector<double>{0.0, 0.0}, L), StationaryPointError);
}

struct SafeCase {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> l;
  double v;
  std::vector<double> c;
};

// Values frozen from an exact rational enumeration of the three-branch
// optimality conditions, with perfect-square L so that m stays rational.
const SafeCase kSafeCases[] = {
    {{1.0, 2.0}, {2.0, 3.0}, {1.0, 1.0}, 2.0, {2.0, 2.0}},
    {{1.0, 10.0}, {2.0, 11.0}, {1.0, 1.0}, 18.0 / 13.0, {2.0, 10.0}},
    {{3.0, 4.0}, {3.0, 4.0}, {1.0, 1.0}, 49.0 / 25.0, {3.0, 4.0}},
    {{1.0, 3.0, 0.5}, {2.0, 5.0, 4.0}, {1.0, 4.0, 9.0}, 349.0 / 25.0, {25.0 / 18.0, 3.0, 4.0}},
    {{0.0, 1.0, 2.0, 3.5}, {1.0, 6.0, 2.0, 5.0}, {9.0, 1.0, 4.0, 1.0}, 170.0 / 23.0,
     {1.0, 23.0 / 14.0, 2.0, 3.5}},
};

class SafeSamplingReference : public ::testing::TestWithParam<SafeCase> {};

TEST_P(SafeSamplingReference, MatchesFrozenValue) {
  const auto& tc = GetParam();
  const LipschitzProfile L(tc.l);
  const auto sol = compute_safe_sampling(GradientBox(tc.lo, tc.hi), L);
  EXPECT_NEAR(sol.v, tc.v, 1e-12 * tc.v);
  EXPECT_NEAR(sol.alpha, 1.0 / tc.v, 1e-12 / tc.v);
  // Compare c up to scale: the certificate is unique only as a direction when
  // every coordinate is interior, which none of these cases are.
  expect_vec_near(sol.c, tc.c, 1e-12 * 10);
  EXPECT_TRUE(is_probability_vector(sol.p));
  EXPECT_EQ(sol.monotonicity_violations, 0u);
  const auto ref = oracle::brute_force_minimax(GradientBox(tc.lo, tc.hi), L);
  EXPECT_NEAR(ref.value, tc.v, 1e-12 * tc.v);
}

INSTANTIATE_TEST_SUITE_P(Frozen, SafeSamplingReference, ::testing::ValuesIn(kSafeCases));

TEST(SafeSampling, SecondFrozenCaseProbabilities) {
  const auto sol = compute_safe_sampling(GradientBox({1.0, 10.0}, {2.0, 11.0}),
                                         LipschitzProfile({1.0, 1.0}));
  expect_vec_near(sol.p, {1.0 / 6.0, 5.0 / 6.0}, 1e-15);
}

TEST(SafeSampling, DegenerateBoxIsOptimalSampling) {
  const LipschitzProfile L({1.0, 1.0});
  const auto sol = compute_safe_sampling(GradientBox({3.0, 4.0}, {3.0, 4.0}), L);
  expect_vec_near(sol.p, {3.0 / 7.0, 4.0 / 7.0}, 1e-15);
  EXPECT_NEAR(stepsize_from_solution(sol), 25.0 / 49.0, 1e-15);
}

TEST(SafeSampling, UninformativeBoxIsFixedSampling) {
  const LipschitzProfile L({0.5, 2.0, 7.25});
  const auto sol = compute_safe_sampling(GradientBox(3), L);
  const auto fixed = fixed_li_sampling(L);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sol.p[i], fixed.p[i]);
  EXPECT_EQ(sol.v, L.trace());
  EXPECT_EQ(sol.alpha, fixed.alpha);
}

TEST(SafeSampling, ZeroUpperBoundsAreExcluded) {
  const LipschitzProfile L({1.0, 1.0, 1.0});
  const auto sol = compute_safe_sampling(GradientBox({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0}), L);
  EXPECT_EQ(sol.p[0], 0.0);
  EXPECT_EQ(sol.excluded, 1u);
  EXPECT_NEAR(sol.v, 2.0, 1e-12);
  EXPECT_THROW(compute_safe_sampling(GradientBox({0.0, 0.0}, {0.0, 0.0}),
                                     LipschitzProfile({1.0, 1.0})),
               StationaryPointError);
}

TEST(SafeSampling, SymmetricBoxHasUniformProbabilities) {
  const auto sol = compute_safe_sampling(GradientBox({1.0, 1.0}, {3.0, 3.0}),
                                         LipschitzProfile({1.0, 1.0}));
  EXPECT_NEAR(sol.v, 2.0, 1e-12);
  expect_vec_near(sol.p, {0.5, 0.5}, 1e-15);
}

TEST(SafeSampling, SolverReuseGivesSameAnswer) {
  SafeSamplingSolver solver;
  SafeSamplingSolution a;
  SafeSamplingSolution b;
  const LipschitzProfile L({1.0, 4.0, 9.0});
  const GradientBox box({1.0, 3.0, 0.5}, {2.0, 5.0, 4.0});
  solver.solve(box, L, a);
  solver.solve(GradientBox({0.0, 1.0}, {kInf, 2.0}), LipschitzProfile({1.0, 1.0}), b);
  solver.solve(box, L, b);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.p, b.p);
}

TEST(SafeSampling, DimensionMismatch) {
  EXPECT_THROW(compute_safe_sampling(GradientBox(2), LipschitzProfile({1.0})), DimensionError);
  EXPECT_THROW(compute_safe_sampling(GradientBox(), LipschitzProfile({1.0})), DimensionError);
}

TEST(Stepsize, Reciprocal) {
  SafeSamplingSolution s;
  s.v = 2.0;
  EXPECT_EQ(stepsize_from_solution(s), 0.5);
}

TEST(DrawIndex, PointMass) {
  Rng rng(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(draw_index(std::vector<double>{1.0, 0.0, 0.0}, rng), 0u);
}

void check_frequencies(const std::vector<double>& p, std::uint64_t seed) {
  constexpr std::size_t draws = 1000000;
  CategoricalSampler sampler(p);
  Rng rng(seed);
  std::vector<std::size_t> counts(p.size(), 0);
  for (std::size_t k = 0; k < draws; ++k) ++counts[sampler.draw(rng)];
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double sigma = std::sqrt(draws * p[i] * (1.0 - p[i]));
    EXPECT_LE(std::abs(static_cast<double>(counts[i]) - draws * p[i]), 3.0 * sigma) << "i=" << i;
  }
}

TEST(DrawIndex, BinomialConcentration) {
  check_frequencies({0.5, 0.5}, 1);
  check_frequencies({1.0 / 6.0, 5.0 / 6.0}, 2);
}

TEST(DrawIndex, NeverReturnsZeroProbability) {
  CategoricalSampler sampler(std::vector<double>{0.3, 0.7, 0.0, 0.0});
  Rng rng(9);
  for (int k = 0; k < 100000; ++k) EXPECT_LT(sampler.draw(rng), 2u);
}

TEST(DrawIndex, DeterministicGivenSeed) {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  Rng a(5);
  Rng b(5);
  for (int k = 0; k < 1000; ++k) EXPECT_EQ(draw_index(p, a), draw_index(p, b));
}

TEST(CompetitiveRatio, DegenerateBoxIsOne) {
  const LipschitzProfile L({1.0, 2.0, 3.0});
  const GradientBox box({1.0, 2.0, 0.5}, {1.0, 2.0, 0.5});
  const auto sol = compute_safe_sampling(box, L);
  const auto r = competitive_ratio_bound(box, L, sol.v);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(*r, 1.0, 1e-12);
}

TEST(CompetitiveRatio, UnboundedIsUnavailable) {
  const LipschitzProfile L({1.0, 1.0});
  EXPECT_FALSE(competitive_ratio_bound(GradientBox({1.0, 0.0}, {2.0, kInf}), L, 2.0).has_value());
}

TEST(CompetitiveRatio, SmallBoxMatchesGrid) {
  // w is the minimum of the objective over the box; a dense grid gives an
  // independent upper estimate that must agree at the vertices.
  const LipschitzProfile L({1.0, 1.0});
  const GradientBox box({1.0, 2.0}, {2.0, 3.0});
  const auto w = min_objective_over_box(box, L);
  ASSERT_TRUE(w.has_value());
  double grid_min = kInf;
  for (int a = 0; a <= 200; ++a) {
    for (int b = 0; b <= 200; ++b) {
      const std::vector<double> c{1.0 + a / 200.0, 2.0 + b / 200.0};
      grid_min = std::min(grid_min, minimax_objective(c, L.sqrt_l()));
    }
  }
  EXPECT_NEAR(*w, grid_min, 1e-12);
  EXPECT_NEAR(*w, 1.6, 1e-12);
  EXPECT_NEAR(*competitive_ratio_bound(box, L, 2.0), 1.25, 1e-12);
}

TEST(MinimaxObjective, Value) {
  EXPECT_NEAR(minimax_objective(std::vector<double>{3.0, 4.0}, std::vector<double>{1.0, 1.0}),
              49.0 / 25.0, 1e-15);
}

}  // namespace
}  // namespace adasamp
