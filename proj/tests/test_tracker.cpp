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

#include "adasamp/bound_tracker.hpp"
#include "adasamp/errors.hpp"
#include "adasamp/glm.hpp"
#include "adasamp/solvers.hpp"
#include "test_support.hpp"

namespace adasamp {
namespace {

using testing::dense_problem;

GlmProblem two_identical_columns() {
  GlmProblem p;
  p.A = SparseDesign::from_dense(2, 2, std::vector<double>{1.0, 1.0, 0.0, 0.0});
  p.b = {1.0, 0.0};
  return p;
}

TEST(Tracker, InitialState) {
  const auto p = dense_problem(4, 3, LossKind::square, RegKind::l2, 0.1, 1);
  for (TrackerMode m : {TrackerMode::cd_cauchy_schwarz, TrackerMode::cd_exact_gram}) {
    BoundTracker t(p, m);
    ASSERT_EQ(t.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(t.box().lower[i], 0.0);
      EXPECT_EQ(t.box().upper[i], kInf);
      EXPECT_EQ(t.box().exact[i], 0);
    }
  }
  BoundTracker s(p, TrackerMode::sgd_cauchy_schwarz);
  EXPECT_EQ(s.size(), 4u);
}

TEST(Tracker, GramTable) {
  BoundTracker t(two_identical_columns(), TrackerMode::cd_exact_gram);
  ASSERT_TRUE(t.has_gram());
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(t.gram(i, j), 1.0);
  }
  auto logistic = dense_problem(4, 3, LossKind::logistic, RegKind::l2, 0.1, 1);
  EXPECT_THROW(BoundTracker(logistic, TrackerMode::cd_exact_gram), InvalidArgument);
  TrackerOptions small;
  small.gram_limit = 2;
  EXPECT_THROW(BoundTracker(dense_problem(4, 3, LossKind::square, RegKind::l2, 0.1, 1),
                            TrackerMode::cd_exact_gram, small),
               InvalidArgument);
}

TEST(Tracker, ObserveAndWiden) {
  const auto p = dense_problem(5, 3, LossKind::square, RegKind::l2, 0.0, 2);
  BoundTracker t(p, TrackerMode::cd_cauchy_schwarz);
  t.observe_exact(0, 3.5);
  EXPECT_EQ(t.box().lower[0], 3.5);
  EXPECT_EQ(t.box().upper[0], 3.5);
  EXPECT_EQ(t.box().exact[0], 1);
  EXPECT_THROW(t.observe_exact(0, -1.0), InvalidArgument);

  CdStep step;
  step.index = 1;
  step.delta = 0.25;
  step.observed = 1.0;
  t.cd_update(step);
  const double d = 0.25 * t.norms()[1] * t.norms()[0];
  EXPECT_EQ(t.box().exact[0], 0);
  EXPECT_NEAR(t.box().lower[0], std::max(0.0, 3.5 - d), 1e-8);
  EXPECT_NEAR(t.box().upper[0], 3.5 + d, 1e-8);
  EXPECT_LE(t.box().lower[0], 3.5 - d);
  EXPECT_GE(t.box().upper[0], 3.5 + d);
  EXPECT_EQ(t.box().lower[1], 1.0);
  EXPECT_EQ(t.box().exact[1], 1);
}

TEST(Tracker, ZeroStepOnlyTouchesActiveIndex) {
  const auto p = dense_problem(5, 3, LossKind::square, RegKind::l2, 0.0, 3);
  BoundTracker t(p, TrackerMode::cd_cauchy_schwarz);
  t.refresh_exact(std::vector<double>{1.0, -2.0, 3.0});
  CdStep step;
  step.index = 2;
  step.delta = 0.0;
  step.observed = -4.0;
  t.cd_update(step);
  EXPECT_EQ(t.box().lower, (std::vector<double>{1.0, 2.0, 4.0}));
  EXPECT_EQ(t.box().upper, (std::vector<double>{1.0, 2.0, 4.0}));
  EXPECT_EQ(t.widen_calls(), 0u);

  BoundTracker s(p, TrackerMode::sgd_cauchy_schwarz);
  s.refresh_exact(std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  SgdStep sstep;
  sstep.index = 0;
  sstep.observed = 0.5;
  s.sgd_update(sstep);
  EXPECT_EQ(s.box().lower, (std::vector<double>{0.5, 2.0, 3.0, 4.0, 5.0}));
  EXPECT_EQ(s.widen_calls(), 0u);
}

TEST(Tracker, ModeMismatchIsRejected) {
  const auto p = dense_problem(5, 3, LossKind::square, RegKind::l2, 0.0, 3);
  BoundTracker cd(p, TrackerMode::cd_cauchy_schwarz);
  EXPECT_THROW(cd.sgd_update(SgdStep{}), InvalidArgument);
  BoundTracker sgd(p, TrackerMode::sgd_cauchy_schwarz);
  EXPECT_THROW(sgd.cd_update(CdStep{}), InvalidArgument);
  EXPECT_THROW(parse_tracker_mode("gram"), InvalidArgument);
  EXPECT_EQ(parse_tracker_mode("cd_exact_gram"), TrackerMode::cd_exact_gram);
}

TEST(Tracker, RefreshMakesBoxDegenerate) {
  const auto p = dense_problem(5, 3, LossKind::square, RegKind::l2, 0.0, 3);
  BoundTracker t(p, TrackerMode::cd_cauchy_schwarz);
  t.refresh_exact(std::vector<double>{-1.0, 0.0, 2.0});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.box().lower[i], t.box().upper[i]);
    EXPECT_EQ(t.box().exact[i], 1);
  }
  EXPECT_EQ(t.box().upper[0], 1.0);
}

struct AuditResult {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::size_t iterations = 0;
};

AuditResult audit_cd(const GlmProblem& problem, TrackerMode mode, std::size_t iters,
                     std::uint64_t seed) {
  SolverConfig c;
  c.method = Method::cd;
  c.sampler = SamplerKind::safe_adaptive;
  c.tracker = mode;
  c.iterations = iters;
  c.seed = seed;
  AuditResult r;
  run_cd(problem, c, [&](const IterationView& v) {
    ++r.iterations;
    for (std::size_t j = 0; j < v.box->size(); ++j) {
      const double g = std::abs(v.state->coordinate_gradient(j));
      ++r.checks;
      if (!(v.box->lower[j] <= g && g <= v.box->upper[j])) ++r.violations;
    }
  });
  return r;
}

AuditResult audit_sgd(const GlmProblem& problem, std::size_t iters, std::uint64_t seed) {
  SolverConfig c;
  c.method = Method::sgd;
  c.sampler = SamplerKind::safe_adaptive;
  c.tracker = TrackerMode::sgd_cauchy_schwarz;
  c.stepsize = StepsizeMode::inv_sqrt_k;
  c.step_constant = 0.5;
  c.iterations = iters;
  c.seed = seed;
  AuditResult r;
  run_sgd(problem, c, [&](const IterationView& v) {
    ++r.iterations;
    for (std::size_t j = 0; j < v.box->size(); ++j) {
      const double g = component_gradient_norm(problem, v.x, j);
      ++r.checks;
      if (!(v.box->lower[j] <= g && g <= v.box->upper[j])) ++r.violations;
    }
  });
  return r;
}

TEST(TrackerSafety, CauchySchwarzSmallLeastSquares) {
  const auto p = dense_problem(5, 5, LossKind::square, RegKind::l2, 0.0, 11);
  const auto r = audit_cd(p, TrackerMode::cd_cauchy_schwarz, 100, 1);
  EXPECT_EQ(r.iterations, 100u);
  EXPECT_EQ(r.violations, 0u);
}

class TrackerSafetyByLoss : public ::testing::TestWithParam<LossKind> {};

TEST_P(TrackerSafetyByLoss, CoordinateDescent) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto p = dense_problem(20, 15, GetParam(), RegKind::l2, 0.05, seed, 0.5);
    const auto r = audit_cd(p, TrackerMode::cd_cauchy_schwarz, 1500, seed);
    EXPECT_GT(r.checks, 0u);
    EXPECT_EQ(r.violations, 0u) << to_string(GetParam());
  }
}

TEST_P(TrackerSafetyByLoss, CoordinateDescentLasso) {
  const auto p = dense_problem(20, 15, GetParam(), RegKind::l1, 0.05, 4, 0.5);
  const auto r = audit_cd(p, TrackerMode::cd_cauchy_schwarz, 1500, 4);
  EXPECT_EQ(r.violations, 0u) << to_string(GetParam());
}

TEST_P(TrackerSafetyByLoss, StochasticGradient) {
  for (RegKind reg : {RegKind::l2, RegKind::l1}) {
    const auto p = dense_problem(15, 10, GetParam(), reg, 0.05, 5, 0.5);
    const auto r = audit_sgd(p, 1500, 5);
    EXPECT_GT(r.checks, 0u);
    EXPECT_EQ(r.violations, 0u) << to_string(GetParam()) << " " << to_string(reg);
  }
}

INSTANTIATE_TEST_SUITE_P(Losses, TrackerSafetyByLoss,
                         ::testing::Values(LossKind::square, LossKind::logistic,
                                           LossKind::squared_hinge));

TEST(TrackerSafety, SparseDesignWithEmptyColumns) {
  SyntheticSpec spec;
  spec.rows = 30;
  spec.cols = 25;
  spec.density = 0.08;
  spec.seed = 17;
  auto data = make_synthetic(spec);
  GlmProblem p;
  p.A = std::move(data.design);
  p.b = std::move(data.labels);
  p.lambda = 0.01;
  const auto r = audit_cd(p, TrackerMode::cd_cauchy_schwarz, 2000, 3);
  EXPECT_EQ(r.violations, 0u);
}

TEST(TrackerExactness, GramBoundsStayDegenerate) {
  const auto p = dense_problem(12, 8, LossKind::square, RegKind::l2, 0.1, 21);
  SolverConfig c;
  c.sampler = SamplerKind::safe_adaptive;
  c.tracker = TrackerMode::cd_exact_gram;
  c.iterations = 300;
  c.seed = 2;
  double worst = 0.0;
  run_cd(p, c, [&](const IterationView& v) {
    for (std::size_t j = 0; j < v.box->size(); ++j) {
      EXPECT_EQ(v.box->lower[j], v.box->upper[j]);
      const double g = std::abs(v.state->coordinate_gradient(j));
      worst = std::max(worst, std::abs(v.box->upper[j] - g) / std::max(1.0, g));
    }
  });
  EXPECT_LT(worst, 1e-9);
}

}  // namespace
}  // namespace adasamp
