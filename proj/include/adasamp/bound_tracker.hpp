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
#include <string_view>
#include <vector>

#include "adasamp/glm.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp {

enum class TrackerMode { cd_cauchy_schwarz, cd_exact_gram, sgd_cauchy_schwarz };

std::string_view to_string(TrackerMode m);
TrackerMode parse_tracker_mode(std::string_view s);

struct TrackerOptions {
  // Relative slack on interval endpoints for rounding in the widening itself.
  double guard = 1e-12;
  std::size_t gram_limit = 20000;
};

// One coordinate descent step as seen by the tracker.
struct CdStep {
  std::size_t index = 0;
  // Displacement of x_index.
  double delta = 0.0;
  // Gradient at index after the step (signed).
  double observed = 0.0;
  // Norm of the updated margins on the support of a_index.
  double z_support_norm = 0.0;
  // Upper bound on ||h'(z)||_2 before and after the step.
  double h_norm_bound = 0.0;
};

// One stochastic gradient step as seen by the tracker.
struct SgdStep {
  std::size_t index = 0;
  // x_pre + gamma a_index is the plain gradient step.
  double gamma = 0.0;
  // ||x_pre + gamma a_index - x_post||, the displacement added by the prox.
  double residual = 0.0;
  // Upper bound on the iterate norms involved in the step.
  double x_norm_bound = 0.0;
  // ||grad f_index(x_post)||.
  double observed = 0.0;
};

// Safe intervals on coordinate gradient magnitudes (coordinate descent) or on
// component gradient norms (stochastic gradient).
class BoundTracker {
 public:
  BoundTracker(const GlmProblem& problem, TrackerMode mode, TrackerOptions options = {});

  TrackerMode mode() const noexcept { return mode_; }
  const GradientBox& box() const noexcept { return box_; }
  std::size_t size() const noexcept { return box_.size(); }
  double curvature() const noexcept { return curvature_; }
  std::span<const double> norms() const noexcept { return norms_; }
  bool has_gram() const noexcept { return !gram_.empty(); }
  double gram(std::size_t i, std::size_t j) const { return gram_.at(i * size() + j); }

  void observe_exact(std::size_t i, double magnitude);

  // Collapses every interval. Gram mode takes signed gradients; the other
  // modes use magnitudes.
  void refresh_exact(std::span<const double> values);

  void cd_update(const CdStep& step);
  void sgd_update(const SgdStep& step);

  std::size_t widen_calls() const noexcept { return widen_calls_; }

 private:
  void widen_all(std::span<const double> weights, double scale);

  TrackerMode mode_;
  TrackerOptions options_;
  double curvature_ = 1.0;
  double eval_kappa_ = 0.0;
  GradientBox box_;
  std::vector<double> norms_;
  std::vector<double> sq_norms_;
  std::vector<std::size_t> zero_weight_;
  std::vector<double> pinned_;
  std::vector<double> gram_;
  std::vector<double> signed_;
  bool signed_valid_ = false;
  std::size_t widen_calls_ = 0;
};

}  // namespace adasamp
