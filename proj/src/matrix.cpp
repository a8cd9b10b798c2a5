#include "kpca/matrix.hpp"

#include <cmath>
#include <string>

#include "kpca/errors.hpp"

namespace kpca {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("DenseMatrix: data length " +
                     std::to_string(data_.size()) + " != " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  check_finite();
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw ShapeError("DenseMatrix: ragged initializer rows");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
  check_finite();
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

DenseMatrix DenseMatrix::select_rows(
    std::span<const std::size_t> indices) const {
  DenseMatrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) {
      throw ParamError("select_rows: index " + std::to_string(indices[i]) +
                       " out of range for " + std::to_string(rows_) + " rows");
    }
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

bool DenseMatrix::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void DenseMatrix::check_finite() const {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw ParamError("DenseMatrix: non-finite entry at flat index " +
                       std::to_string(i));
    }
  }
}

}  // namespace kpca
