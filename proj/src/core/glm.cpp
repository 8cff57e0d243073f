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
#include <string>

#include "adasamp/errors.hpp"
#include "adasamp/glm.hpp"
#include "adasamp/kernels.hpp"

namespace adasamp {

std::string_view to_string(LossKind k) {
  switch (k) {
    case LossKind::square:
      return "square";
    case LossKind::logistic:
      return "logistic";
    case LossKind::squared_hinge:
      return "squared_hinge";
  }
  return "unknown";
}

std::string_view to_string(RegKind k) { return k == RegKind::l1 ? "l1" : "l2"; }

std::string_view to_string(LipschitzMode m) {
  return m == LipschitzMode::per_coordinate ? "per_coordinate" : "uniform_max";
}

LossKind parse_loss(std::string_view s) {
  if (s == "square") return LossKind::square;
  if (s == "logistic") return LossKind::logistic;
  if (s == "squared_hinge") return LossKind::squared_hinge;
  throw InvalidArgument("unknown loss '" + std::string(s) + "'");
}

RegKind parse_reg(std::string_view s) {
  if (s == "l1") return RegKind::l1;
  if (s == "l2") return RegKind::l2;
  throw InvalidArgument("unknown regularizer '" + std::string(s) + "'");
}

LipschitzMode parse_lipschitz_mode(std::string_view s) {
  if (s == "per_coordinate") return LipschitzMode::per_coordinate;
  if (s == "uniform_max") return LipschitzMode::uniform_max;
  throw InvalidArgument("unknown lipschitz mode '" + std::string(s) + "'");
}

double loss_value(LossKind k, double z, double b) {
  switch (k) {
    case LossKind::square: {
      const double r = z - b;
      return 0.5 * r * r;
    }
    case LossKind::logistic: {
      const double t = -b * z;
      return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
    }
    case LossKind::squared_hinge: {
      const double m = 1.0 - b * z;
      return m > 0.0 ? m * m : 0.0;
    }
  }
  return 0.0;
}

double loss_derivative(LossKind k, double z, double b) {
  switch (k) {
    case LossKind::square:
      return z - b;
    case LossKind::logistic: {
      const double t = b * z;
      if (t >= 0.0) {
        const double e = std::exp(-t);
        return -b * e / (1.0 + e);
      }
      return -b / (1.0 + std::exp(t));
    }
    case LossKind::squared_hinge: {
      const double m = 1.0 - b * z;
      return m > 0.0 ? -2.0 * b * m : 0.0;
    }
  }
  return 0.0;
}

double loss_curvature_bound(LossKind k) {
  switch (k) {
    case LossKind::square:
      return 1.0;
    case LossKind::logistic:
      return 0.25;
    case LossKind::squared_hinge:
      return 2.0;
  }
  return 1.0;
}

void GlmProblem::check() const {
  if (A.rows() == 0 || A.cols() == 0) throw DimensionError("GlmProblem: empty design");
  if (b.size() != A.rows()) throw DimensionError("GlmProblem: label count differs from rows");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("GlmProblem: lambda must be finite and >= 0");
  }
  for (double bi : b) {
    if (!std::isfinite(bi)) throw InvalidArgument("GlmProblem: non-finite label");
    if (loss != LossKind::square && bi != 1.0 && bi != -1.0) {
      throw InvalidArgument("GlmProblem: classification losses need labels in {-1, +1}");
    }
  }
}

std::vector<double> margins(const GlmProblem& problem, std::span<const double> x) {
  if (x.size() != problem.dim()) throw DimensionError("margins: dimension mismatch");
  std::vector<double> z(problem.A.rows());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto r = problem.A.row(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < r.nnz(); ++k) acc += r.values[k] * x[r.index[k]];
    z[i] = acc;
  }
  return z;
}

double regularizer_value(const GlmProblem& problem, std::span<const double> x) {
  double r = 0.0;
  if (problem.reg == RegKind::l1) {
    for (double xi : x) r += std::abs(xi);
  } else {
    for (double xi : x) r += xi * xi;
  }
  return problem.lambda * r;
}

namespace {

double loss_sum(const GlmProblem& problem, std::span<const double> x, Form form) {
  const auto z = margins(problem, x);
  double total = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) total += loss_value(problem.loss, z[j], problem.b[j]);
  return form == Form::sgd ? total / static_cast<double>(z.size()) : total;
}

}  // namespace

double smooth_objective(const GlmProblem& problem, std::span<const double> x, Form form) {
  const double l2 = problem.reg == RegKind::l2 ? regularizer_value(problem, x) : 0.0;
  return loss_sum(problem, x, form) + l2;
}

double objective(const GlmProblem& problem, std::span<const double> x, Form form) {
  return loss_sum(problem, x, form) + regularizer_value(problem, x);
}

std::vector<double> smooth_gradient(const GlmProblem& problem, std::span<const double> x,
                                    Form form) {
  const auto z = margins(problem, x);
  const double scale = form == Form::sgd ? 1.0 / static_cast<double>(z.size()) : 1.0;
  std::vector<double> g(problem.dim(), 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double d = scale * loss_derivative(problem.loss, z[i], problem.b[i]);
    const auto r = problem.A.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) g[r.index[k]] += d * r.values[k];
  }
  if (problem.reg == RegKind::l2) {
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += 2.0 * problem.lambda * x[j];
  }
  return g;
}

CoordinateState::CoordinateState(const GlmProblem& problem, std::vector<double> x0)
    : problem_(&problem), x_(std::move(x0)) {
  if (x_.size() != problem.dim()) throw DimensionError("CoordinateState: dimension mismatch");
  refresh();
}

std::span<double> CoordinateState::mutable_x() noexcept {
  ++x_version_;
  return x_;
}

void CoordinateState::refresh() {
  z_ = margins(*problem_, x_);
  z_version_ = x_version_;
}

void CoordinateState::require_fresh() const {
  if (z_version_ != x_version_) throw StaleCacheError("CoordinateState: margins are stale");
}

double CoordinateState::loss_gradient(std::size_t i) const {
  require_fresh();
  const auto c = problem_->A.col(i);
  const LossKind loss = problem_->loss;
  double g = 0.0;
  for (std::size_t k = 0; k < c.nnz(); ++k) {
    const std::uint32_t j = c.index[k];
    g += c.values[k] * loss_derivative(loss, z_[j], problem_->b[j]);
  }
  return g;
}

double CoordinateState::coordinate_gradient(std::size_t i) const {
  const double g = loss_gradient(i);
  if (problem_->reg == RegKind::l2) return g + 2.0 * problem_->lambda * x_[i];
  return g;
}

CoordinateState::StepInfo CoordinateState::apply(std::size_t i, double delta) {
  require_fresh();
  StepInfo info;
  x_[i] += delta;
  const auto c = problem_->A.col(i);
  const LossKind loss = problem_->loss;
  double zz = 0.0;
  for (std::size_t k = 0; k < c.nnz(); ++k) {
    const std::uint32_t j = c.index[k];
    const double b = problem_->b[j];
    const double before = loss_derivative(loss, z_[j], b);
    z_[j] += delta * c.values[k];
    const double after = loss_derivative(loss, z_[j], b);
    info.h2_change += after * after - before * before;
    zz += z_[j] * z_[j];
  }
  info.z_support_norm = std::sqrt(zz);
  return info;
}

double CoordinateState::h2_total() const {
  double total = 0.0;
  for (std::size_t j = 0; j < z_.size(); ++j) {
    const double d = loss_derivative(problem_->loss, z_[j], problem_->b[j]);
    total += d * d;
  }
  return total;
}

double component_loss_derivative(const GlmProblem& problem, std::span<const double> x,
                                 std::size_t i) {
  const auto r = problem.A.row(i);
  const double z = kernels::sparse_dot(r.values, r.index, x);
  return loss_derivative(problem.loss, z, problem.b[i]);
}

double component_gradient_norm(const GlmProblem& problem, std::span<const double> x,
                               std::size_t i) {
  return std::abs(component_loss_derivative(problem, x, i)) * problem.A.row_norm(i);
}

namespace {

LipschitzProfile finish_profile(std::vector<double> l, LipschitzMode mode) {
  for (double& li : l) li = std::max(li, kLipschitzFloor);
  if (mode == LipschitzMode::uniform_max) {
    const double top = *std::max_element(l.begin(), l.end());
    std::fill(l.begin(), l.end(), top);
  }
  return LipschitzProfile(std::move(l));
}

}  // namespace

LipschitzProfile coordinate_lipschitz(const GlmProblem& problem, LipschitzMode mode) {
  const double M = problem.curvature();
  const double ridge = problem.reg == RegKind::l2 ? 2.0 * problem.lambda : 0.0;
  std::vector<double> l(problem.dim());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double a = problem.A.col_norm(i);
    l[i] = M * a * a + ridge;
  }
  return finish_profile(std::move(l), mode);
}

LipschitzProfile component_lipschitz(const GlmProblem& problem, LipschitzMode mode) {
  const double M = problem.curvature();
  std::vector<double> l(problem.A.rows());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double a = problem.A.row_norm(i);
    l[i] = M * a * a;
  }
  return finish_profile(std::move(l), mode);
}

double prox_step(RegKind reg, double lambda, double t, double value) {
  if (reg == RegKind::l2) return value / (1.0 + 2.0 * lambda * t);
  const double thr = lambda * t;
  if (value > thr) return value - thr;
  if (value < -thr) return value + thr;
  return 0.0;
}

}  // namespace adasamp
