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
#include <span>
#include <vector>

#include "adasamp/glm.hpp"
#include "adasamp/sampling.hpp"

// Brute-force references for tests and manual cross-checks. Deliberately
// independent of the two-pointer solver.
namespace adasamp::oracle {

struct MinimaxResult {
  double value = 0.0;
  std::vector<double> certificate;
  std::size_t feasible_assignments = 0;
};

inline constexpr std::size_t kMaxBruteForceDim = 8;

// Enumerates every lower/upper/interior branch assignment and keeps the best
// self-consistent one. Bounded boxes with n <= kMaxBruteForceDim.
MinimaxResult brute_force_minimax(const GradientBox& box, const LipschitzProfile& L);

// Dense grid over the box, n <= 3.
MinimaxResult grid_search_minimax(const GradientBox& box, const LipschitzProfile& L,
                                  std::size_t points_per_axis = 201);

// sum_i p_i f(x - (alpha / p_i) grad_i f(x) e_i) over the smooth coordinate
// descent objective, outcome by outcome.
double exhaustive_expected_value(const GlmProblem& problem, std::span<const double> x,
                                 std::span<const double> p, double alpha);

// Central differences of the smooth objective with step 1e-5 max(1, |x_i|).
std::vector<double> finite_difference_gradient(const GlmProblem& problem,
                                               std::span<const double> x, Form form = Form::cd);

}  // namespace adasamp::oracle
