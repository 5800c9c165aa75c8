#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace svne {

// Compressed-sparse-row matrix. The neurodynamic solver is matrix-free in the
// sense that it only ever needs y += A x and y += A^T x; dense storage is
// never materialized (the enhancement LP has Theta(n^5) variables).
class SparseMatrix {
 public:
  SparseMatrix() : rows_(0), cols_(0), row_ptr_{0} {}
  SparseMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return col_.size(); }

  // Streaming row construction: add entries for the current row, then
  // close_row(). Entries may repeat a column; they are summed on close.
  void add(int col, double value);
  void close_row();

  // y (+)= A x
  void multiply(std::span<const double> x, std::span<double> y, bool accumulate) const;
  // y (+)= A^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y, bool accumulate) const;

  // Row access for diagnostics and tests.
  std::span<const int> row_cols(int r) const;
  std::span<const double> row_values(int r) const;

 private:
  int rows_, cols_;
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

}  // namespace svne
