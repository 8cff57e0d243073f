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
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include <zlib.h>

#include "adasamp/data.hpp"
#include "adasamp/errors.hpp"
#include "adasamp/kernels.hpp"
#include "adasamp/rng.hpp"

namespace adasamp {

SparseDesign SparseDesign::from_csr(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> ptr, std::vector<std::uint32_t> idx,
                                    std::vector<double> val) {
  if (ptr.size() != rows + 1 || ptr.front() != 0 || ptr.back() != idx.size() ||
      idx.size() != val.size()) {
    throw DimensionError("SparseDesign: inconsistent CSR arrays");
  }
  if (cols > std::numeric_limits<std::uint32_t>::max()) {
    throw DimensionError("SparseDesign: too many columns");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (ptr[i] > ptr[i + 1]) throw DimensionError("SparseDesign: row pointers decrease");
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) {
      if (idx[k] >= cols) throw DimensionError("SparseDesign: column index out of range");
      if (k > ptr[i] && idx[k] <= idx[k - 1]) {
        throw InvalidArgument("SparseDesign: column indices not increasing in row " +
                              std::to_string(i));
      }
      if (!std::isfinite(val[k])) throw InvalidArgument("SparseDesign: non-finite value");
    }
  }
  SparseDesign d;
  d.rows_ = rows;
  d.cols_ = cols;
  d.row_ptr_ = std::move(ptr);
  d.row_idx_ = std::move(idx);
  d.row_val_ = std::move(val);
  d.build_columns();
  d.compute_norms();
  return d;
}

SparseDesign SparseDesign::from_dense(std::size_t rows, std::size_t cols,
                                      std::span<const double> row_major) {
  if (row_major.size() != rows * cols) throw DimensionError("from_dense: size mismatch");
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double a = row_major[i * cols + j];
      if (a != 0.0) {
        idx.push_back(static_cast<std::uint32_t>(j));
        val.push_back(a);
      }
    }
    ptr.push_back(idx.size());
  }
  return from_csr(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

void SparseDesign::build_columns() {
  col_ptr_.assign(cols_ + 1, 0);
  for (std::uint32_t j : row_idx_) ++col_ptr_[j + 1];
  std::partial_sum(col_ptr_.begin(), col_ptr_.end(), col_ptr_.begin());
  col_idx_.resize(row_idx_.size());
  col_val_.resize(row_val_.size());
  std::vector<std::size_t> next(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t slot = next[row_idx_[k]]++;
      col_idx_[slot] = static_cast<std::uint32_t>(i);
      col_val_[slot] = row_val_[k];
    }
  }
}

void SparseDesign::compute_norms() {
  row_norms_.resize(rows_);
  col_norms_.resize(cols_);
  max_row_nnz_ = 0;
  max_col_nnz_ = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    row_norms_[i] = std::sqrt(kernels::sum_squares(r.values));
    max_row_nnz_ = std::max(max_row_nnz_, r.nnz());
  }
  for (std::size_t j = 0; j < cols_; ++j) {
    const Slice c = col(j);
    col_norms_[j] = std::sqrt(kernels::sum_squares(c.values));
    max_col_nnz_ = std::max(max_col_nnz_, c.nnz());
  }
}

SparseDesign::Slice SparseDesign::row(std::size_t i) const noexcept {
  const std::size_t b = row_ptr_[i];
  const std::size_t e = row_ptr_[i + 1];
  return {std::span<const double>(row_val_).subspan(b, e - b),
          std::span<const std::uint32_t>(row_idx_).subspan(b, e - b)};
}

SparseDesign::Slice SparseDesign::col(std::size_t j) const noexcept {
  const std::size_t b = col_ptr_[j];
  const std::size_t e = col_ptr_[j + 1];
  return {std::span<const double>(col_val_).subspan(b, e - b),
          std::span<const std::uint32_t>(col_idx_).subspan(b, e - b)};
}

double SparseDesign::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw DimensionError("SparseDesign::at: out of range");
  const Slice r = row(i);
  const auto it = std::lower_bound(r.index.begin(), r.index.end(), j);
  if (it == r.index.end() || *it != j) return 0.0;
  return r.values[static_cast<std::size_t>(it - r.index.begin())];
}

std::vector<double> SparseDesign::to_dense() const {
  std::vector<double> out(rows_ * cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const Slice r = row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) out[i * cols_ + r.index[k]] = r.values[k];
  }
  return out;
}

SparseDesign SparseDesign::with_values(std::vector<double> row_values) const {
  if (row_values.size() != row_val_.size()) throw DimensionError("with_values: size mismatch");
  return from_csr(rows_, cols_, row_ptr_, row_idx_, std::move(row_values));
}

void SparseDesign::check() const {
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  if (col_idx_.size() != row_idx_.size()) throw Error("SparseDesign: layouts differ in nnz");
  for (std::size_t j = 0; j < cols_; ++j) {
    const Slice c = col(j);
    double ss = 0.0;
    for (std::size_t k = 0; k < c.nnz(); ++k) {
      if (k > 0 && c.index[k] <= c.index[k - 1]) throw Error("SparseDesign: column order");
      if (at(c.index[k], j) != c.values[k]) throw Error("SparseDesign: layouts disagree");
      ss += c.values[k] * c.values[k];
    }
    if (!close(std::sqrt(ss), col_norms_[j])) throw Error("SparseDesign: stale column norm");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double ss = 0.0;
    for (double v : row(i).values) ss += v * v;
    if (!close(std::sqrt(ss), row_norms_[i])) throw Error("SparseDesign: stale row norm");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view tok, std::size_t line, const char* what) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, std::string("non-finite ") + what);
  return value;
}

void append_chars(std::string& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::size_t min_features) {
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  std::vector<double> labels;
  std::size_t features = min_features;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;

    std::size_t pos = 0;
    const auto next_token = [&]() {
      const auto b = text.find_first_not_of(" \t", pos);
      if (b == std::string_view::npos) {
        pos = text.size();
        return std::string_view{};
      }
      const auto e = std::min(text.find_first_of(" \t", b), text.size());
      pos = e;
      return text.substr(b, e - b);
    };

    labels.push_back(parse_double(next_token(), line, "label"));
    std::uint64_t prev = 0;
    for (auto tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) throw ParseError(line, "expected index:value");
      const auto istr = tok.substr(0, colon);
      std::uint64_t index = 0;
      const auto [p, ec] = std::from_chars(istr.data(), istr.data() + istr.size(), index);
      if (ec != std::errc() || p != istr.data() + istr.size() || istr.empty()) {
        throw ParseError(line, "bad index '" + std::string(istr) + "'");
      }
      if (index == 0) throw ParseError(line, "indices are 1-based");
      if (index > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(line, "index too large");
      }
      if (index == prev) throw ParseError(line, "duplicate index " + std::to_string(index));
      if (index < prev) throw ParseError(line, "indices not increasing");
      prev = index;
      const double value = parse_double(tok.substr(colon + 1), line, "value");
      features = std::max<std::size_t>(features, index);
      if (value == 0.0) continue;
      idx.push_back(static_cast<std::uint32_t>(index - 1));
      val.push_back(value);
    }
    ptr.push_back(idx.size());
  }
  if (labels.empty()) throw ParseError(line, "empty input");
  Dataset out;
  out.design =
      SparseDesign::from_csr(labels.size(), features, std::move(ptr), std::move(idx), std::move(val));
  out.labels = std::move(labels);
  return out;
}

Dataset parse_libsvm(const std::string& text, std::size_t min_features) {
  std::istringstream in(text);
  return parse_libsvm(in, min_features);
}

Dataset read_libsvm(const std::string& path, std::size_t min_features) {
  if (path.size() > 3 && path.ends_with(".gz")) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) throw Error("cannot open " + path);
    std::string text;
    char buf[1 << 16];
    int got = 0;
    while ((got = gzread(f, buf, sizeof(buf))) > 0) text.append(buf, static_cast<std::size_t>(got));
    const bool failed = got < 0;
    gzclose(f);
    if (failed) throw Error("gzip read failed: " + path);
    return parse_libsvm(text, min_features);
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_libsvm(in, min_features);
}

void write_libsvm(std::ostream& out, const Dataset& data) {
  out << to_libsvm(data);
}

std::string to_libsvm(const Dataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.design.rows(); ++i) {
    append_chars(out, data.labels[i]);
    const auto r = data.design.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      out.push_back(' ');
      out += std::to_string(r.index[k] + 1);
      out.push_back(':');
      append_chars(out, r.values[k]);
    }
    out.push_back('\n');
  }
  return out;
}

SparseDesign binarize(const SparseDesign& design) {
  return design.with_values(std::vector<double>(design.nnz(), 1.0));
}

namespace {

std::vector<std::size_t> choose(std::size_t n, std::size_t k, Rng& rng, bool preserve_order) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(k);
  if (preserve_order) std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

Dataset subsample(const Dataset& data, std::size_t n_rows, std::size_t n_cols,
                  std::uint64_t seed, bool preserve_order) {
  const SparseDesign& a = data.design;
  if (n_rows > a.rows() || n_cols > a.cols()) {
    throw DimensionError("subsample: request exceeds dimensions");
  }
  Rng rng(seed);
  const auto rows = choose(a.rows(), n_rows, rng, preserve_order);
  const auto cols = choose(a.cols(), n_cols, rng, preserve_order);
  constexpr auto kDropped = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(a.cols(), kDropped);
  for (std::size_t j = 0; j < cols.size(); ++j) remap[cols[j]] = static_cast<std::uint32_t>(j);

  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  std::vector<double> labels;
  std::vector<std::pair<std::uint32_t, double>> entries;
  for (std::size_t i : rows) {
    entries.clear();
    const auto r = a.row(i);
    for (std::size_t k = 0; k < r.nnz(); ++k) {
      if (remap[r.index[k]] != kDropped) entries.emplace_back(remap[r.index[k]], r.values[k]);
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [j, v] : entries) {
      idx.push_back(j);
      val.push_back(v);
    }
    ptr.push_back(idx.size());
    labels.push_back(data.labels[i]);
  }
  Dataset out;
  out.design = SparseDesign::from_csr(n_rows, n_cols, std::move(ptr), std::move(idx), std::move(val));
  out.labels = std::move(labels);
  return out;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.rows == 0 || spec.cols == 0) throw DimensionError("make_synthetic: empty shape");
  if (!(spec.density > 0.0) || spec.density > 1.0) {
    throw InvalidArgument("make_synthetic: density must lie in (0, 1]");
  }
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> col_scale(spec.cols, 1.0);
  std::vector<double> col_density(spec.cols, spec.density);
  for (std::size_t j = 0; j < spec.cols; ++j) {
    const double factor = std::exp(spec.column_scale_sigma * normal(rng));
    if (spec.binary) {
      col_density[j] = std::min(1.0, spec.density * factor);
    } else {
      col_scale[j] = factor;
    }
  }

  const double inv_sqrt_rows = 1.0 / std::sqrt(static_cast<double>(spec.rows));
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < spec.rows; ++i) {
    for (std::size_t j = 0; j < spec.cols; ++j) {
      const double keep = uniform01(rng);
      const double g = normal(rng);
      if (keep >= col_density[j]) continue;
      const double a = spec.binary ? 1.0 : g * inv_sqrt_rows * col_scale[j];
      if (a == 0.0) continue;
      idx.push_back(static_cast<std::uint32_t>(j));
      val.push_back(a);
    }
    ptr.push_back(idx.size());
  }
  Dataset out;
  out.design =
      SparseDesign::from_csr(spec.rows, spec.cols, std::move(ptr), std::move(idx), std::move(val));

  std::vector<double> planted(spec.cols);
  for (double& x : planted) x = normal(rng);
  out.labels.resize(spec.rows);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    const auto r = out.design.row(i);
    double z = 0.0;
    for (std::size_t k = 0; k < r.nnz(); ++k) z += r.values[k] * planted[r.index[k]];
    const double e = normal(rng);
    switch (spec.labels) {
      case LabelKind::gaussian:
        out.labels[i] = e;
        break;
      case LabelKind::planted:
        out.labels[i] = z + spec.noise * e;
        break;
      case LabelKind::sign:
        out.labels[i] = z + spec.noise * e >= 0.0 ? 1.0 : -1.0;
        break;
    }
  }
  return out;
}

}  // namespace adasamp
