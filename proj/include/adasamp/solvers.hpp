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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adasamp/bound_tracker.hpp"
#include "adasamp/glm.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp {

enum class Method { cd, sgd };
enum class SamplerKind { uniform, fixed_li, optimal_full_info, safe_adaptive };
// big_adaptive / small_fixed apply to coordinate descent, the rest to
// stochastic gradient.
enum class StepsizeMode { big_adaptive, small_fixed, inv_mu_k, constant, inv_sqrt_k };
enum class RunStatus { completed, converged, diverged };

std::string_view to_string(Method m);
std::string_view to_string(SamplerKind s);
std::string_view to_string(StepsizeMode s);
std::string_view to_string(RunStatus s);
Method parse_method(std::string_view s);
SamplerKind parse_sampler(std::string_view s);
StepsizeMode parse_stepsize_mode(std::string_view s);

struct SolverConfig {
  std::string name;
  Method method = Method::cd;
  SamplerKind sampler = SamplerKind::safe_adaptive;
  StepsizeMode stepsize = StepsizeMode::big_adaptive;
  // Scale for constant and inv_sqrt_k.
  double step_constant = 1.0;
  // Strong convexity for inv_mu_k; 0 means 2 lambda.
  double mu = 0.0;
  std::size_t epochs = 10;
  // Overrides epochs when nonzero.
  std::size_t iterations = 0;
  // Iterations between trace rows; 0 means one epoch.
  std::size_t metric_interval = 0;
  std::uint64_t seed = 0;
  TrackerMode tracker = TrackerMode::cd_cauchy_schwarz;
  TrackerOptions tracker_options;
  // Collapse every bound to the true value every this many iterations; 0
  // never does.
  std::size_t refresh_interval = 0;
  LipschitzMode lipschitz = LipschitzMode::per_coordinate;

  // Throws ConfigError on an invalid combination.
  void validate() const;
};

struct TraceRow {
  std::size_t iteration = 0;
  double epoch = 0.0;
  double time_s = 0.0;
  double fval = 0.0;
  std::optional<double> v_k;
  std::optional<double> v_k_over_trace;
};

struct MetricsTrace {
  std::string sampler;
  std::string stepsize_mode;
  std::uint64_t seed = 0;
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::completed;
  std::size_t iterations_run = 0;
  double final_fval = 0.0;
  double total_s = 0.0;
  double sampling_s = 0.0;
  double gradient_s = 0.0;
  std::size_t monotonicity_violations = 0;
  std::vector<double> x;
};

// State handed to an observer once per iteration, after the distribution for
// x_k is fixed and before the step.
struct IterationView {
  std::size_t iteration = 0;
  std::span<const double> x;
  std::span<const double> p;
  double alpha = 0.0;
  std::optional<double> v;
  // Bounds describing x_k; null for samplers without a tracker.
  const GradientBox* box = nullptr;
  // Coordinate descent only.
  const CoordinateState* state = nullptr;
};

using Observer = std::function<void(const IterationView&)>;

MetricsTrace run_cd(const GlmProblem& problem, const SolverConfig& config,
                    const Observer& observer = {});
MetricsTrace run_sgd(const GlmProblem& problem, const SolverConfig& config,
                     const Observer& observer = {});
MetricsTrace run_solver(const GlmProblem& problem, const SolverConfig& config,
                        const Observer& observer = {});

struct ProgressCheck {
  // Exact expectation of f(x_{k+1}) over the n outcomes.
  double lhs = 0.0;
  // f(x) - alpha ||g||^2 + alpha^2/2 V(p, g); equals f(x) - alpha/2 ||g||^2
  // at alpha = ||g||^2 / V(p, g).
  double rhs = 0.0;
};

// Coordinate descent form, smooth problems only.
ProgressCheck expected_progress_check(const GlmProblem& problem, std::span<const double> x,
                                      std::span<const double> p, double alpha);

// ||g||^2 / V(p, g), the stepsize minimizing the upper model for fixed p.
double model_optimal_alpha(std::span<const double> p, std::span<const double> g,
                           const LipschitzProfile& L);

}  // namespace adasamp
