#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace kpca {

// Row-major dense real matrix, the numeric carrier shared by every module.
// Constructors taking data reject non-finite entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  // Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);

  // Takes ownership of `data` (row-major, length rows*cols).
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  // Literal rows, e.g. DenseMatrix{{1, 2}, {3, 4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }
  const std::vector<double>& values() const { return data_; }

  DenseMatrix transposed() const;

  // Copies the listed rows (in order) into a new matrix.
  DenseMatrix select_rows(std::span<const std::size_t> indices) const;

  bool all_finite() const;

 private:
  void check_finite() const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace kpca
