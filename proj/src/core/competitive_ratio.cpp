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

#include "adasamp/errors.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp {

namespace {

// The objective is quasi-concave along each coordinate, so its minimum over
// the box sits at a vertex.
struct VertexWalk {
  std::vector<std::size_t> free;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> w;
  double s0 = 0.0;
  double q0 = 0.0;
};

VertexWalk make_walk(const GradientBox& box, const LipschitzProfile& L) {
  VertexWalk walk;
  const auto sqrt_l = L.sqrt_l();
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double l = box.lower[i];
    const double u = box.upper[i];
    if (l == u) {
      walk.s0 += sqrt_l[i] * l;
      walk.q0 += l * l;
    } else {
      walk.free.push_back(i);
      walk.lo.push_back(l);
      walk.hi.push_back(u);
      walk.w.push_back(sqrt_l[i]);
    }
  }
  return walk;
}

double exact_scan(const VertexWalk& walk) {
  const std::size_t k = walk.free.size();
  double best = kInf;
  const std::uint64_t count = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double s = walk.s0;
    double q = walk.q0;
    for (std::size_t j = 0; j < k; ++j) {
      const double c = (mask >> j) & 1U ? walk.hi[j] : walk.lo[j];
      s += walk.w[j] * c;
      q += c * c;
    }
    if (q > 0.0) best = std::min(best, s * s / q);
  }
  return best;
}

double descend(const VertexWalk& walk, std::vector<std::uint8_t>& at_hi) {
  const std::size_t k = walk.free.size();
  double s = walk.s0;
  double q = walk.q0;
  for (std::size_t j = 0; j < k; ++j) {
    const double c = at_hi[j] ? walk.hi[j] : walk.lo[j];
    s += walk.w[j] * c;
    q += c * c;
  }
  double value = q > 0.0 ? s * s / q : kInf;
  for (bool improved = true; improved;) {
    improved = false;
    for (std::size_t j = 0; j < k; ++j) {
      const double from = at_hi[j] ? walk.hi[j] : walk.lo[j];
      const double to = at_hi[j] ? walk.lo[j] : walk.hi[j];
      const double s2 = s + walk.w[j] * (to - from);
      const double q2 = q + (to * to - from * from);
      if (!(q2 > 0.0)) continue;
      const double cand = s2 * s2 / q2;
      if (cand < value) {
        value = cand;
        s = s2;
        q = q2;
        at_hi[j] ^= 1U;
        improved = true;
      }
    }
  }
  return value;
}

double multistart(const VertexWalk& walk) {
  const std::size_t k = walk.free.size();
  std::vector<std::uint8_t> at_hi(k, 0);
  double best = descend(walk, at_hi);
  std::fill(at_hi.begin(), at_hi.end(), 1);
  best = std::min(best, descend(walk, at_hi));
  Rng rng(0x5eedULL);
  for (int start = 0; start < 32; ++start) {
    for (auto& b : at_hi) b = static_cast<std::uint8_t>(rng() & 1U);
    best = std::min(best, descend(walk, at_hi));
  }
  return best;
}

}  // namespace

std::optional<double> min_objective_over_box(const GradientBox& box, const LipschitzProfile& L,
                                             std::size_t exact_limit) {
  if (L.size() != box.size()) throw DimensionError("min_objective_over_box: length mismatch");
  box.check();
  if (!box.bounded()) return std::nullopt;
  if (std::all_of(box.upper.begin(), box.upper.end(), [](double u) { return u == 0.0; })) {
    throw StationaryPointError("min_objective_over_box: all upper bounds are 0");
  }
  const VertexWalk walk = make_walk(box, L);
  if (walk.free.size() <= std::min<std::size_t>(exact_limit, 30)) return exact_scan(walk);
  return multistart(walk);
}

std::optional<double> competitive_ratio_bound(const GradientBox& box, const LipschitzProfile& L,
                                              double v) {
  const auto w = min_objective_over_box(box, L);
  if (!w) return std::nullopt;
  return std::max(1.0, v / *w);
}

}  // namespace adasamp
