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
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "adasamp/errors.hpp"
#include "adasamp/rng.hpp"

namespace adasamp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-direction smoothness constants with cached square roots and trace.
class LipschitzProfile {
 public:
  LipschitzProfile() = default;
  explicit LipschitzProfile(std::vector<double> l);

  std::size_t size() const noexcept { return l_.size(); }
  double operator[](std::size_t i) const noexcept { return l_[i]; }
  std::span<const double> l() const noexcept { return l_; }
  std::span<const double> sqrt_l() const noexcept { return sqrt_l_; }
  double trace() const noexcept { return trace_; }
  double l_min() const noexcept { return l_min_; }
  double l_max() const noexcept { return l_max_; }

 private:
  std::vector<double> l_;
  std::vector<double> sqrt_l_;
  double trace_ = 0.0;
  double l_min_ = 0.0;
  double l_max_ = 0.0;
};

using ProbabilityVector = std::vector<double>;

// Nonnegative entries summing to one within `tol`.
bool is_probability_vector(std::span<const double> p, double tol = 1e-12);

// Safe intervals [lower, upper] on gradient magnitudes.
struct GradientBox {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::uint8_t> exact;

  GradientBox() = default;
  explicit GradientBox(std::size_t n) : lower(n, 0.0), upper(n, kInf), exact(n, 0) {}
  GradientBox(std::vector<double> lo, std::vector<double> hi);

  std::size_t size() const noexcept { return lower.size(); }
  bool bounded() const noexcept;

  // Throws InvalidArgument when an invariant is broken.
  void check() const;
};

struct SafeSamplingSolution {
  std::vector<double> c;
  ProbabilityVector p;
  double v = 0.0;
  double alpha = 0.0;
  double m = 0.0;

  std::size_t decided = 0;
  std::size_t excluded = 0;
  // Steps where the m-sequence moved outside its expected bracket.
  std::size_t monotonicity_violations = 0;
};

struct Sampling {
  ProbabilityVector p;
  double alpha = 0.0;
};

// sum_i L_i c_i^2 / p_i with 0/0 = 0. The template accepts any field type
// (exact rationals in tests).
template <class T>
T effective_value_of(std::span<const T> p, std::span<const T> c, std::span<const T> l);

double effective_value(std::span<const double> p, std::span<const double> c,
                       const LipschitzProfile& L);

// (sum sqrt(L_i) c_i)^2 / sum c_i^2, summed in index order.
double minimax_objective(std::span<const double> c, std::span<const double> sqrt_l);

Sampling fixed_li_sampling(const LipschitzProfile& L);

// Throws StationaryPointError when g is identically zero.
Sampling optimal_sampling(std::span<const double> g, const LipschitzProfile& L);

// Two-pointer solver for the box-constrained minimax sampling problem. Keeps
// its sort buffers between calls.
class SafeSamplingSolver {
 public:
  void solve(const GradientBox& box, const LipschitzProfile& L, SafeSamplingSolution& out);

 private:
  struct Key {
    double key;
    std::uint32_t index;
  };

  void sort_keys(std::vector<Key>& keys);

  std::vector<Key> lowers_;
  std::vector<Key> uppers_;
  std::vector<Key> scratch_;
  std::vector<std::size_t> counts_;
  std::vector<std::uint8_t> decided_;
};

SafeSamplingSolution compute_safe_sampling(const GradientBox& box, const LipschitzProfile& L);

double stepsize_from_solution(const SafeSamplingSolution& s);

// Inverse-CDF draws. Indices with p_i = 0 are never returned.
class CategoricalSampler {
 public:
  CategoricalSampler() = default;
  explicit CategoricalSampler(std::span<const double> p) { reset(p); }

  void reset(std::span<const double> p);
  std::size_t draw(Rng& rng) const;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
  std::size_t last_positive_ = 0;
};

std::size_t draw_index(std::span<const double> p, Rng& rng);

// Lower estimate of min over the box of the minimax objective. Exact vertex
// scan for n <= exact_limit, multi-start vertex descent above. Empty for
// unbounded boxes.
std::optional<double> min_objective_over_box(const GradientBox& box, const LipschitzProfile& L,
                                             std::size_t exact_limit = 16);

// v / w; empty when the box is unbounded.
std::optional<double> competitive_ratio_bound(const GradientBox& box, const LipschitzProfile& L,
                                              double v);

template <class T>
T effective_value_of(std::span<const T> p, std::span<const T> c, std::span<const T> l) {
  if (p.size() != c.size() || p.size() != l.size()) {
    throw DimensionError("effective_value: length mismatch");
  }
  T total{0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (c[i] == T{0}) continue;
    if (p[i] == T{0}) throw InfiniteValueError("effective_value: p_i = 0 with c_i != 0");
    total = total + l[i] * c[i] * c[i] / p[i];
  }
  return total;
}

}  // namespace adasamp
