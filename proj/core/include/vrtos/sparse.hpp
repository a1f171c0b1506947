#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vrtos {

using Index = std::int32_t;

// Compressed row storage for the design matrix. Column indices are 0-based
// and strictly increasing within a row; stored values are finite and nonzero.
class SparseRowMatrix {
 public:
  SparseRowMatrix() : row_ptr_{0} {}
  explicit SparseRowMatrix(std::size_t n_cols) : n_cols_(n_cols), row_ptr_{0} {}

  struct RowView {
    std::span<const Index> cols;
    std::span<const double> vals;
    std::size_t size() const { return cols.size(); }
  };

  void append_row(std::span<const Index> cols, std::span<const double> vals);
  void set_n_cols(std::size_t n_cols) { n_cols_ = n_cols; }

  std::size_t n_rows() const { return row_ptr_.size() - 1; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return col_.size(); }
  std::size_t row_nnz(std::size_t i) const { return row_ptr_[i + 1] - row_ptr_[i]; }

  RowView row(std::size_t i) const {
    const std::size_t begin = row_ptr_[i], end = row_ptr_[i + 1];
    return {std::span(col_).subspan(begin, end - begin),
            std::span(val_).subspan(begin, end - begin)};
  }

  double row_dot(std::size_t i, const double* x) const {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += val_[k] * x[col_[k]];
    return acc;
  }

  double row_sq_norm(std::size_t i) const {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += val_[k] * val_[k];
    return acc;
  }

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;

  bool operator==(const SparseRowMatrix& other) const = default;

 private:
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<Index> col_;
  std::vector<double> val_;
};

}  // namespace vrtos
