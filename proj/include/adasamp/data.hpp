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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adasamp {

// Sparse matrix held in both row-major and column-major compressed form, with
// cached Euclidean row and column norms.
class SparseDesign {
 public:
  struct Slice {
    std::span<const double> values;
    std::span<const std::uint32_t> index;

    std::size_t nnz() const noexcept { return values.size(); }
  };

  SparseDesign() = default;

  // Row-major input; column indices strictly increasing within a row.
  static SparseDesign from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> ptr,
                               std::vector<std::uint32_t> idx, std::vector<double> val);
  // Row-major dense input; exact zeros are dropped.
  static SparseDesign from_dense(std::size_t rows, std::size_t cols,
                                 std::span<const double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return row_val_.size(); }

  Slice row(std::size_t i) const noexcept;
  Slice col(std::size_t j) const noexcept;

  double row_norm(std::size_t i) const noexcept { return row_norms_[i]; }
  double col_norm(std::size_t j) const noexcept { return col_norms_[j]; }
  std::span<const double> row_norms() const noexcept { return row_norms_; }
  std::span<const double> col_norms() const noexcept { return col_norms_; }
  std::size_t max_row_nnz() const noexcept { return max_row_nnz_; }
  std::size_t max_col_nnz() const noexcept { return max_col_nnz_; }

  double at(std::size_t i, std::size_t j) const;
  std::vector<double> to_dense() const;

  // Rebuilds from transformed row values; the sparsity pattern is kept.
  SparseDesign with_values(std::vector<double> row_values) const;

  // Structural and cache consistency; throws on failure.
  void check() const;

 private:
  void build_columns();
  void compute_norms();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> row_idx_;
  std::vector<double> row_val_;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> col_val_;
  std::vector<double> row_norms_;
  std::vector<double> col_norms_;
  std::size_t max_row_nnz_ = 0;
  std::size_t max_col_nnz_ = 0;
};

struct Dataset {
  SparseDesign design;
  std::vector<double> labels;
};

// `<label> <index>:<value> ...`, 1-based increasing indices. Feature count is
// the largest index seen unless `min_features` is larger.
Dataset parse_libsvm(std::istream& in, std::size_t min_features = 0);
Dataset parse_libsvm(const std::string& text, std::size_t min_features = 0);

// Reads a file; names ending in .gz are inflated.
Dataset read_libsvm(const std::string& path, std::size_t min_features = 0);

void write_libsvm(std::ostream& out, const Dataset& data);
std::string to_libsvm(const Dataset& data);

SparseDesign binarize(const SparseDesign& design);

// Uniform selection without replacement of rows and columns.
Dataset subsample(const Dataset& data, std::size_t n_rows, std::size_t n_cols,
                  std::uint64_t seed, bool preserve_order = true);

enum class LabelKind { gaussian, planted, sign };

struct SyntheticSpec {
  std::size_t rows = 50;
  std::size_t cols = 50;
  double density = 1.0;
  // Columns are multiplied by exp(sigma * N(0,1)).
  double column_scale_sigma = 0.0;
  bool binary = false;
  LabelKind labels = LabelKind::gaussian;
  double noise = 0.1;
  std::uint64_t seed = 1;
};

// Entries N(0,1)/sqrt(rows) (or 1 when binary) kept with probability density.
Dataset make_synthetic(const SyntheticSpec& spec);

}  // namespace adasamp
