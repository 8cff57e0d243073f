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
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "adasamp/errors.hpp"
#include "adasamp/kernels.hpp"
#include "adasamp/sampling.hpp"

namespace adasamp {

namespace {

constexpr double kBracketTol = 1e-12;

bool within_bracket(double value, double lo, double hi) {
  return value >= lo * (1.0 - kBracketTol) && value <= hi * (1.0 + kBracketTol);
}

constexpr std::size_t kRadixCutoff = 2048;
constexpr unsigned kDigitBits = 11;
constexpr unsigned kDigits = (64 + kDigitBits - 1) / kDigitBits;
constexpr std::size_t kBuckets = std::size_t{1} << kDigitBits;

}  // namespace

// Orders by (key, index). Keys are nonnegative or +inf, so their bit patterns
// sort like the values; a stable LSD pass over index-ordered input keeps ties
// in index order.
void SafeSamplingSolver::sort_keys(std::vector<Key>& keys) {
  if (keys.size() < kRadixCutoff) {
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
      return a.key < b.key || (a.key == b.key && a.index < b.index);
    });
    return;
  }
  const auto bits = [](const Key& k) { return std::bit_cast<std::uint64_t>(k.key); };
  counts_.assign(kDigits * kBuckets, 0);
  for (const Key& k : keys) {
    const std::uint64_t b = bits(k);
    for (unsigned d = 0; d < kDigits; ++d) {
      ++counts_[d * kBuckets + ((b >> (d * kDigitBits)) & (kBuckets - 1))];
    }
  }
  scratch_.resize(keys.size());
  for (unsigned d = 0; d < kDigits; ++d) {
    std::size_t* count = counts_.data() + d * kBuckets;
    const std::uint64_t first = (bits(keys.front()) >> (d * kDigitBits)) & (kBuckets - 1);
    if (count[first] == keys.size()) continue;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < kBuckets; ++b) {
      const std::size_t c = count[b];
      count[b] = offset;
      offset += c;
    }
    for (const Key& k : keys) {
      scratch_[count[(bits(k) >> (d * kDigitBits)) & (kBuckets - 1)]++] = k;
    }
    keys.swap(scratch_);
  }
}

void SafeSamplingSolver::solve(const GradientBox& box, const LipschitzProfile& L,
                               SafeSamplingSolution& out) {
  const std::size_t n = box.size();
  if (n == 0) throw DimensionError("compute_safe_sampling: empty box");
  if (L.size() != n) throw DimensionError("compute_safe_sampling: box and L differ in length");
  box.check();

  const auto sqrt_l = L.sqrt_l();
  out.c.assign(n, 0.0);
  out.p.assign(n, 0.0);
  out.decided = 0;
  out.excluded = 0;
  out.monotonicity_violations = 0;

  // Scaled keys go through the SIMD divide; c itself is filled from the raw
  // bounds so decided entries are exact.
  std::vector<double>& lower_keys = out.c;
  std::vector<double>& upper_keys = out.p;
  kernels::divide(box.lower, sqrt_l, lower_keys);
  kernels::divide(box.upper, sqrt_l, upper_keys);

  lowers_.clear();
  uppers_.clear();
  lowers_.reserve(n);
  uppers_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (box.upper[i] == 0.0) {
      ++out.excluded;
      continue;
    }
    const auto idx = static_cast<std::uint32_t>(i);
    lowers_.push_back({lower_keys[i], idx});
    uppers_.push_back({upper_keys[i], idx});
  }
  if (lowers_.empty()) throw StationaryPointError("compute_safe_sampling: all upper bounds are 0");

  sort_keys(lowers_);
  sort_keys(uppers_);

  std::fill(out.c.begin(), out.c.end(), 0.0);
  std::fill(out.p.begin(), out.p.end(), 0.0);
  decided_.assign(n, 0);

  const std::size_t active = lowers_.size();
  std::size_t hi_ptr = active;
  std::size_t lo_ptr = 0;
  double m = lowers_.back().key;
  double num = 0.0;
  double den = 0.0;

  while (out.decided < active) {
    while (hi_ptr > 0 && decided_[lowers_[hi_ptr - 1].index]) --hi_ptr;
    while (lo_ptr < active && decided_[uppers_[lo_ptr].index]) ++lo_ptr;

    std::size_t i = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    if (hi_ptr > 0 && lowers_[hi_ptr - 1].key > m) {
      const Key& k = lowers_[--hi_ptr];
      i = k.index;
      out.c[i] = box.lower[i];
      bracket_lo = m;
      bracket_hi = k.key;
    } else if (lo_ptr < active && uppers_[lo_ptr].key < m) {
      const Key& k = uppers_[lo_ptr++];
      i = k.index;
      out.c[i] = box.upper[i];
      bracket_lo = k.key;
      bracket_hi = m;
    } else {
      break;
    }
    decided_[i] = 1;
    ++out.decided;
    num += out.c[i] * out.c[i];
    den += sqrt_l[i] * out.c[i];
    const double next = num / den;
    if (!within_bracket(next, bracket_lo, bracket_hi)) ++out.monotonicity_violations;
    m = next;
  }
  assert(out.monotonicity_violations == 0);

  double tr_active = L.trace();
  double l_min_active = L.l_min();
  if (out.excluded > 0) {
    tr_active = 0.0;
    l_min_active = kInf;
    for (const Key& k : lowers_) {
      tr_active += L[k.index];
      l_min_active = std::min(l_min_active, L[k.index]);
    }
  }

  if (out.decided == 0) {
    // No bound is active: the certificate direction is sqrt(L) and only its
    // scale is free.
    if (!(m > 0.0)) {
      const double min_upper = uppers_.front().key;
      m = std::isfinite(min_upper) ? min_upper : 1.0;
    }
    for (const Key& k : lowers_) {
      out.c[k.index] = sqrt_l[k.index] * m;
      out.p[k.index] = L[k.index] / tr_active;
    }
    out.m = m;
    out.v = tr_active;
    out.alpha = 1.0 / out.v;
    return;
  }

  for (const Key& k : lowers_) {
    if (!decided_[k.index]) out.c[k.index] = sqrt_l[k.index] * m;
  }
  double s = 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += sqrt_l[i] * out.c[i];
    q += out.c[i] * out.c[i];
  }
  for (std::size_t i = 0; i < n; ++i) out.p[i] = sqrt_l[i] * out.c[i] / s;
  out.m = m;
  out.v = std::clamp(s * s / q, l_min_active, tr_active);
  out.alpha = 1.0 / out.v;
}

SafeSamplingSolution compute_safe_sampling(const GradientBox& box, const LipschitzProfile& L) {
  SafeSamplingSolver solver;
  SafeSamplingSolution out;
  solver.solve(box, L, out);
  return out;
}

}  // namespace adasamp
