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
#include <limits>
#include <string>

#include "adasamp/bound_tracker.hpp"
#include "adasamp/errors.hpp"
#include "adasamp/kernels.hpp"

namespace adasamp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Covers the relative rounding of the norms that enter a widening scale.
constexpr double kScaleHeadroom = 1.0 + 1e-9;

}  // namespace

std::string_view to_string(TrackerMode m) {
  switch (m) {
    case TrackerMode::cd_cauchy_schwarz:
      return "cd_cauchy_schwarz";
    case TrackerMode::cd_exact_gram:
      return "cd_exact_gram";
    case TrackerMode::sgd_cauchy_schwarz:
      return "sgd_cauchy_schwarz";
  }
  return "unknown";
}

TrackerMode parse_tracker_mode(std::string_view s) {
  if (s == "cd_cauchy_schwarz") return TrackerMode::cd_cauchy_schwarz;
  if (s == "cd_exact_gram") return TrackerMode::cd_exact_gram;
  if (s == "sgd_cauchy_schwarz") return TrackerMode::sgd_cauchy_schwarz;
  throw InvalidArgument("unknown tracker mode '" + std::string(s) + "'");
}

BoundTracker::BoundTracker(const GlmProblem& problem, TrackerMode mode, TrackerOptions options)
    : mode_(mode), options_(options), curvature_(problem.curvature()) {
  const SparseDesign& A = problem.A;
  if (A.rows() == 0 || A.cols() == 0) throw DimensionError("BoundTracker: empty problem");
  const bool sgd = mode == TrackerMode::sgd_cauchy_schwarz;
  const auto src = sgd ? A.row_norms() : A.col_norms();
  norms_.assign(src.begin(), src.end());
  sq_norms_.resize(norms_.size());
  for (std::size_t i = 0; i < norms_.size(); ++i) sq_norms_[i] = norms_[i] * norms_[i];
  box_ = GradientBox(norms_.size());
  for (std::size_t i = 0; i < norms_.size(); ++i) {
    if (sq_norms_[i] == 0.0) zero_weight_.push_back(i);
  }

  // Two evaluations of an nnz-term sum, each off by at most (nnz + 8) eps
  // times the product of the norms.
  const double nnz = static_cast<double>(sgd ? A.max_row_nnz() : A.max_col_nnz());
  eval_kappa_ = 2.0 * (nnz + 8.0) * kEps;

  if (mode == TrackerMode::cd_exact_gram) {
    if (problem.loss != LossKind::square) {
      throw InvalidArgument("BoundTracker: exact gram tracking needs the square loss");
    }
    const std::size_t n = A.cols();
    if (n > options_.gram_limit) {
      throw InvalidArgument("BoundTracker: gram table for n = " + std::to_string(n) +
                            " exceeds the limit " + std::to_string(options_.gram_limit));
    }
    gram_.assign(n * n, 0.0);
    for (std::size_t r = 0; r < A.rows(); ++r) {
      const auto row = A.row(r);
      for (std::size_t a = 0; a < row.nnz(); ++a) {
        const std::size_t i = row.index[a];
        for (std::size_t b = 0; b < row.nnz(); ++b) {
          gram_[i * n + row.index[b]] += row.values[a] * row.values[b];
        }
      }
    }
    signed_.assign(n, 0.0);
  }
}

void BoundTracker::observe_exact(std::size_t i, double magnitude) {
  if (i >= size()) throw DimensionError("observe_exact: index out of range");
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw InvalidArgument("observe_exact: magnitude must be finite and >= 0");
  }
  box_.lower[i] = magnitude;
  box_.upper[i] = magnitude;
  box_.exact[i] = 1;
}

void BoundTracker::refresh_exact(std::span<const double> values) {
  if (values.size() != size()) throw DimensionError("refresh_exact: length mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) observe_exact(i, std::abs(values[i]));
  if (mode_ == TrackerMode::cd_exact_gram) {
    signed_.assign(values.begin(), values.end());
    signed_valid_ = true;
  }
}

void BoundTracker::widen_all(std::span<const double> weights, double scale) {
  ++widen_calls_;
  // Entries with zero weight cannot move; keep them bit-exact.
  pinned_.clear();
  for (std::size_t i : zero_weight_) pinned_.push_back(box_.upper[i]);
  kernels::widen(box_.lower, box_.upper, weights, scale, options_.guard);
  for (std::size_t k = 0; k < zero_weight_.size(); ++k) {
    const std::size_t i = zero_weight_[k];
    if (box_.exact[i]) {
      box_.lower[i] = pinned_[k];
      box_.upper[i] = pinned_[k];
    }
  }
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) box_.exact[i] = 0;
  }
}

void BoundTracker::cd_update(const CdStep& step) {
  if (mode_ == TrackerMode::sgd_cauchy_schwarz) {
    throw InvalidArgument("cd_update: tracker is in stochastic gradient mode");
  }
  const std::size_t i = step.index;
  if (i >= size()) throw DimensionError("cd_update: index out of range");
  if (!std::isfinite(step.delta)) throw InvalidArgument("cd_update: non-finite step");

  if (mode_ == TrackerMode::cd_exact_gram && signed_valid_) {
    const std::size_t n = size();
    if (step.delta != 0.0) {
      const double* g = gram_.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) signed_[j] += step.delta * g[j];
    }
    signed_[i] = step.observed;
    for (std::size_t j = 0; j < n; ++j) observe_exact(j, std::abs(signed_[j]));
    return;
  }

  if (step.delta != 0.0) {
    const double M = curvature_;
    const double scale = (M * (std::abs(step.delta) * norms_[i] + 4.0 * kEps * step.z_support_norm) +
                          eval_kappa_ * step.h_norm_bound) *
                         kScaleHeadroom;
    widen_all(norms_, scale);
  }
  observe_exact(i, std::abs(step.observed));
}

void BoundTracker::sgd_update(const SgdStep& step) {
  if (mode_ != TrackerMode::sgd_cauchy_schwarz) {
    throw InvalidArgument("sgd_update: tracker is in coordinate descent mode");
  }
  const std::size_t i = step.index;
  if (i >= size()) throw DimensionError("sgd_update: index out of range");
  if (!std::isfinite(step.gamma) || !(step.residual >= 0.0)) {
    throw InvalidArgument("sgd_update: invalid step record");
  }
  if (step.gamma != 0.0 || step.residual != 0.0) {
    const double M = curvature_;
    const double move = std::abs(step.gamma) * norms_[i] + step.residual +
                        eval_kappa_ * step.x_norm_bound;
    widen_all(sq_norms_, M * move * kScaleHeadroom);
  }
  observe_exact(i, step.observed);
}

}  // namespace adasamp
