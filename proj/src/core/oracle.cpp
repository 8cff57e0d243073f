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

#include "adasamp/errors.hpp"
#include "adasamp/oracle.hpp"

namespace adasamp::oracle {

namespace {

constexpr double kTol = 1e-12;

enum Branch : int { kLower = 0, kUpper = 1, kInterior = 2 };

double ratio(std::span<const double> c, std::span<const double> sqrt_l) {
  double s = 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s += sqrt_l[i] * c[i];
    q += c[i] * c[i];
  }
  return s * s / q;
}

void require_bounded(const GradientBox& box, const LipschitzProfile& L) {
  if (box.size() != L.size()) throw DimensionError("oracle: box and L differ in length");
  if (box.size() == 0) throw DimensionError("oracle: empty box");
  box.check();
  if (!box.bounded()) throw InvalidArgument("oracle: unbounded box");
}

}  // namespace

MinimaxResult brute_force_minimax(const GradientBox& box, const LipschitzProfile& L) {
  require_bounded(box, L);
  const std::size_t n = box.size();
  if (n > kMaxBruteForceDim) throw DimensionError("brute_force_minimax: n too large");

  std::vector<double> sqrt_l(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_l[i] = std::sqrt(L[i]);

  // Coordinates with u_i = 0 are pinned at 0 and drop out of every sum.
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < n; ++i) {
    if (box.upper[i] > 0.0) free.push_back(i);
  }
  if (free.empty()) throw StationaryPointError("brute_force_minimax: all upper bounds are 0");

  std::size_t count = 1;
  for (std::size_t k = 0; k < free.size(); ++k) count *= 3;

  MinimaxResult best;
  best.value = -1.0;
  std::vector<int> branch(free.size());
  std::vector<double> c(n, 0.0);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t rest = code;
    for (auto& b : branch) {
      b = static_cast<int>(rest % 3);
      rest /= 3;
    }

    double num = 0.0;
    double den = 0.0;
    bool any_decided = false;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const std::size_t i = free[k];
      if (branch[k] == kInterior) continue;
      const double ci = branch[k] == kLower ? box.lower[i] : box.upper[i];
      num += ci * ci;
      den += sqrt_l[i] * ci;
      any_decided = true;
    }

    double m = 0.0;
    if (any_decided) {
      if (!(den > 0.0)) continue;
      m = num / den;
    } else {
      // All interior: feasible exactly when one m fits every interval.
      double lo = 0.0;
      double hi = kInf;
      for (std::size_t i : free) {
        lo = std::max(lo, box.lower[i] / sqrt_l[i]);
        hi = std::min(hi, box.upper[i] / sqrt_l[i]);
      }
      if (lo > hi * (1.0 + kTol)) continue;
      m = lo > 0.0 ? lo : hi;
    }

    bool feasible = true;
    for (std::size_t k = 0; k < free.size() && feasible; ++k) {
      const std::size_t i = free[k];
      const double t = sqrt_l[i] * m;
      switch (branch[k]) {
        case kUpper:
          feasible = box.upper[i] <= t * (1.0 + kTol);
          c[i] = box.upper[i];
          break;
        case kLower:
          feasible = box.lower[i] >= t * (1.0 - kTol);
          c[i] = box.lower[i];
          break;
        default:
          feasible = box.lower[i] <= t * (1.0 + kTol) && t <= box.upper[i] * (1.0 + kTol);
          c[i] = std::clamp(t, box.lower[i], box.upper[i]);
          break;
      }
    }
    if (!feasible) continue;
    ++best.feasible_assignments;
    const double value = ratio(c, sqrt_l);
    if (value > best.value) {
      best.value = value;
      best.certificate = c;
    }
  }
  if (best.feasible_assignments == 0) throw Error("brute_force_minimax: no feasible assignment");
  return best;
}

MinimaxResult grid_search_minimax(const GradientBox& box, const LipschitzProfile& L,
                                  std::size_t points_per_axis) {
  require_bounded(box, L);
  const std::size_t n = box.size();
  if (n > 3) throw DimensionError("grid_search_minimax: n too large");
  if (points_per_axis < 2) throw InvalidArgument("grid_search_minimax: need two points per axis");

  std::vector<double> sqrt_l(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_l[i] = std::sqrt(L[i]);

  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= points_per_axis;
  MinimaxResult best;
  best.value = -1.0;
  std::vector<double> c(n);
  const double steps = static_cast<double>(points_per_axis - 1);
  for (std::size_t code = 0; code < count; ++code) {
    std::size_t rest = code;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(rest % points_per_axis) / steps;
      rest /= points_per_axis;
      c[i] = box.lower[i] + t * (box.upper[i] - box.lower[i]);
      q += c[i] * c[i];
    }
    if (!(q > 0.0)) continue;
    ++best.feasible_assignments;
    const double value = ratio(c, sqrt_l);
    if (value > best.value) {
      best.value = value;
      best.certificate = c;
    }
  }
  return best;
}

double exhaustive_expected_value(const GlmProblem& problem, std::span<const double> x,
                                 std::span<const double> p, double alpha) {
  if (problem.reg == RegKind::l1 && problem.lambda > 0.0) {
    throw InvalidArgument("exhaustive_expected_value: nonsmooth regularizer");
  }
  const std::size_t n = problem.dim();
  if (x.size() != n || p.size() != n) throw DimensionError("exhaustive_expected_value: lengths");
  const auto g = smooth_gradient(problem, x, Form::cd);
  std::vector<double> y(x.begin(), x.end());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == 0.0) continue;
    y[i] = x[i] - alpha / p[i] * g[i];
    total += p[i] * smooth_objective(problem, y, Form::cd);
    y[i] = x[i];
  }
  return total;
}

std::vector<double> finite_difference_gradient(const GlmProblem& problem,
                                               std::span<const double> x, Form form) {
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
    y[i] = x[i] + h;
    const double up = smooth_objective(problem, y, form);
    y[i] = x[i] - h;
    const double down = smooth_objective(problem, y, form);
    y[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace adasamp::oracle
