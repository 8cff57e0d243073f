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
#include "adasamp/sampling.hpp"

namespace adasamp {

LipschitzProfile::LipschitzProfile(std::vector<double> l) : l_(std::move(l)) {
  if (l_.empty()) throw DimensionError("LipschitzProfile: empty");
  sqrt_l_.resize(l_.size());
  l_min_ = kInf;
  l_max_ = 0.0;
  for (std::size_t i = 0; i < l_.size(); ++i) {
    const double li = l_[i];
    if (!(li > 0.0) || !std::isfinite(li)) {
      throw InvalidArgument("LipschitzProfile: entry " + std::to_string(i) +
                            " must be positive and finite");
    }
    sqrt_l_[i] = std::sqrt(li);
    trace_ += li;
    l_min_ = std::min(l_min_, li);
    l_max_ = std::max(l_max_, li);
  }
}

bool is_probability_vector(std::span<const double> p, double tol) {
  double total = 0.0;
  for (double pi : p) {
    if (!(pi >= 0.0)) return false;
    total += pi;
  }
  return std::abs(total - 1.0) <= tol;
}

GradientBox::GradientBox(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)), exact(lower.size(), 0) {
  if (lower.size() != upper.size()) throw DimensionError("GradientBox: length mismatch");
  check();
}

bool GradientBox::bounded() const noexcept {
  return std::all_of(upper.begin(), upper.end(), [](double u) { return std::isfinite(u); });
}

void GradientBox::check() const {
  if (upper.size() != lower.size() || exact.size() != lower.size()) {
    throw DimensionError("GradientBox: length mismatch");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const double l = lower[i];
    const double u = upper[i];
    if (!(l >= 0.0) || !std::isfinite(l) || !(u >= l)) {
      throw InvalidArgument("GradientBox: need 0 <= lower <= upper at " + std::to_string(i));
    }
    if (exact[i] && (l != u || !std::isfinite(u))) {
      throw InvalidArgument("GradientBox: exact entry with nondegenerate interval at " +
                            std::to_string(i));
    }
  }
}

double effective_value(std::span<const double> p, std::span<const double> c,
                       const LipschitzProfile& L) {
  return effective_value_of<double>(p, c, L.l());
}

double minimax_objective(std::span<const double> c, std::span<const double> sqrt_l) {
  double s = 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s += sqrt_l[i] * c[i];
    q += c[i] * c[i];
  }
  return s * s / q;
}

Sampling fixed_li_sampling(const LipschitzProfile& L) {
  Sampling out;
  out.p.resize(L.size());
  const double tr = L.trace();
  for (std::size_t i = 0; i < L.size(); ++i) out.p[i] = L[i] / tr;
  out.alpha = 1.0 / tr;
  return out;
}

Sampling optimal_sampling(std::span<const double> g, const LipschitzProfile& L) {
  if (g.size() != L.size()) throw DimensionError("optimal_sampling: length mismatch");
  const auto sqrt_l = L.sqrt_l();
  double s = 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0)) throw InvalidArgument("optimal_sampling: negative magnitude");
    s += sqrt_l[i] * g[i];
    q += g[i] * g[i];
  }
  if (!(s > 0.0)) throw StationaryPointError("optimal_sampling: zero gradient");
  Sampling out;
  out.p.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.p[i] = sqrt_l[i] * g[i] / s;
  out.alpha = std::clamp(q / (s * s), 1.0 / L.trace(), 1.0 / L.l_min());
  return out;
}

double stepsize_from_solution(const SafeSamplingSolution& s) { return 1.0 / s.v; }

void CategoricalSampler::reset(std::span<const double> p) {
  cdf_.resize(p.size());
  double acc = 0.0;
  last_positive_ = p.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf_[i] = acc;
    if (p[i] > 0.0) last_positive_ = i;
  }
  if (last_positive_ == p.size()) throw InvalidArgument("CategoricalSampler: no positive mass");
}

std::size_t CategoricalSampler::draw(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  return i < last_positive_ ? i : last_positive_;
}

std::size_t draw_index(std::span<const double> p, Rng& rng) {
  return CategoricalSampler(p).draw(rng);
}

}  // namespace adasamp
