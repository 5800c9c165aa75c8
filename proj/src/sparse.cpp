#include "svne/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace svne {

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(0), cols_(cols), row_ptr_{0} {
  if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  row_ptr_.reserve(static_cast<std::size_t>(rows) + 1);
}

void SparseMatrix::add(int col, double value) {
  if (col < 0 || col >= cols_) throw std::out_of_range("SparseMatrix::add: column out of range");
  if (value == 0.0) return;
  col_.push_back(col);
  val_.push_back(value);
}

void SparseMatrix::close_row() {
  std::size_t begin = row_ptr_.back();
  std::size_t end = col_.size();
  // Sort the fresh row and merge duplicate columns.
  if (end - begin > 1) {
    std::vector<std::pair<int, double>> entries;
    entries.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) entries.emplace_back(col_[i], val_[i]);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t w = begin;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (w > begin && col_[w - 1] == entries[i].first) {
        val_[w - 1] += entries[i].second;
      } else {
        col_[w] = entries[i].first;
        val_[w] = entries[i].second;
        ++w;
      }
    }
    col_.resize(w);
    val_.resize(w);
  }
  row_ptr_.push_back(static_cast<int>(col_.size()));
  ++rows_;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y,
                            bool accumulate) const {
  assert(static_cast<int>(x.size()) == cols_ && static_cast<int>(y.size()) == rows_);
  for (int r = 0; r < rows_; ++r) {
    double sum = accumulate ? y[r] : 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += val_[k] * x[col_[k]];
    y[r] = sum;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y,
                                      bool accumulate) const {
  assert(static_cast<int>(x.size()) == rows_ && static_cast<int>(y.size()) == cols_);
  if (!accumulate) std::fill(y.begin(), y.end(), 0.0);
  for (int r = 0; r < rows_; ++r) {
    double xr = x[r];
    if (xr == 0.0) continue;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_[k]] += val_[k] * xr;
  }
}

std::span<const int> SparseMatrix::row_cols(int r) const {
  return {col_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
}

std::span<const double> SparseMatrix::row_values(int r) const {
  return {val_.data() + row_ptr_[r], static_cast<std::size_t>(row_ptr_[r + 1] - row_ptr_[r])};
}

}  // namespace svne
