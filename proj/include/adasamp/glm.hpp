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
#include <vector>

#include "adasamp/data.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp {

enum class LossKind { square, logistic, squared_hinge };
enum class RegKind { l1, l2 };

// Which objective the problem is read as. cd: features are coordinates,
// f(x) = sum_j h(a^j x, b_j) + lambda r(x). sgd: samples are components,
// f(x) = (1/rows) sum_i h(a_i x, b_i) + lambda r(x).
enum class Form { cd, sgd };

// per_coordinate: L_i from each column. uniform_max: every L_i set to the
// largest one.
enum class LipschitzMode { per_coordinate, uniform_max };

std::string_view to_string(LossKind k);
std::string_view to_string(RegKind k);
std::string_view to_string(LipschitzMode m);
LossKind parse_loss(std::string_view s);
RegKind parse_reg(std::string_view s);
LipschitzMode parse_lipschitz_mode(std::string_view s);

// square: (z - b)^2 / 2. logistic: log(1 + exp(-b z)). squared_hinge:
// max(0, 1 - b z)^2.
double loss_value(LossKind k, double z, double b);
double loss_derivative(LossKind k, double z, double b);
// Supremum of the second derivative over z.
double loss_curvature_bound(LossKind k);

inline constexpr double kLipschitzFloor = 1e-12;

struct GlmProblem {
  SparseDesign A;
  std::vector<double> b;
  LossKind loss = LossKind::square;
  RegKind reg = RegKind::l2;
  double lambda = 0.0;

  std::size_t dim() const noexcept { return A.cols(); }
  double curvature() const noexcept { return loss_curvature_bound(loss); }

  // Throws on inconsistent dimensions, negative lambda or bad labels.
  void check() const;
};

// A x, computed row by row.
std::vector<double> margins(const GlmProblem& problem, std::span<const double> x);

double regularizer_value(const GlmProblem& problem, std::span<const double> x);

// Loss part plus the l2 term; the l1 term is left out.
double smooth_objective(const GlmProblem& problem, std::span<const double> x, Form form);
double objective(const GlmProblem& problem, std::span<const double> x, Form form);

// Gradient of smooth_objective.
std::vector<double> smooth_gradient(const GlmProblem& problem, std::span<const double> x,
                                    Form form);

// Iterate and cached margins z = A x for coordinate descent.
class CoordinateState {
 public:
  CoordinateState(const GlmProblem& problem, std::vector<double> x0);

  const GlmProblem& problem() const noexcept { return *problem_; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> z() const noexcept { return z_; }
  std::uint64_t version() const noexcept { return x_version_; }

  // Direct write access; the margin cache is stale until refresh().
  std::span<double> mutable_x() noexcept;
  void refresh();

  // d/dx_i of the smooth objective (loss plus l2), in O(nnz(a_i)).
  double coordinate_gradient(std::size_t i) const;
  // Loss part only.
  double loss_gradient(std::size_t i) const;

  struct StepInfo {
    // Norm of the updated margins restricted to the support of a_i.
    double z_support_norm = 0.0;
    // Change of sum_j h'(z_j)^2 over that support.
    double h2_change = 0.0;
  };

  // x_i += delta with the margins updated in place.
  StepInfo apply(std::size_t i, double delta);

  // sum_j h'(z_j)^2 over all rows.
  double h2_total() const;

 private:
  void require_fresh() const;

  const GlmProblem* problem_;
  std::vector<double> x_;
  std::vector<double> z_;
  std::uint64_t x_version_ = 0;
  std::uint64_t z_version_ = 0;
};

// |h'(a_i x)| * ||a_i||, in O(nnz(a_i)).
double component_gradient_norm(const GlmProblem& problem, std::span<const double> x,
                               std::size_t i);
// h'(a_i x, b_i) with a_i x from the active dot kernel.
double component_loss_derivative(const GlmProblem& problem, std::span<const double> x,
                                 std::size_t i);

// cd: M ||a_i||^2 + 2 lambda (l2). sgd: M ||a_i||^2 over rows. Floored at
// kLipschitzFloor.
LipschitzProfile coordinate_lipschitz(const GlmProblem& problem,
                                      LipschitzMode mode = LipschitzMode::per_coordinate);
LipschitzProfile component_lipschitz(const GlmProblem& problem,
                                     LipschitzMode mode = LipschitzMode::per_coordinate);

// l1: soft threshold at lambda t. l2: value / (1 + 2 lambda t).
double prox_step(RegKind reg, double lambda, double t, double value);

}  // namespace adasamp
