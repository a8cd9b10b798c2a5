#pragma once

// Internal bridge between DenseMatrix and Eigen. Not installed; Eigen stays
// out of the public headers.

#include <Eigen/Dense>

#include "kpca/matrix.hpp"

namespace kpca {

using EMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const EMatrix> as_eigen(const DenseMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

inline Eigen::Map<EMatrix> as_eigen(DenseMatrix& m) {
  return {m.data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

inline DenseMatrix to_dense(const Eigen::Ref<const EMatrix>& e) {
  DenseMatrix m(static_cast<std::size_t>(e.rows()),
                static_cast<std::size_t>(e.cols()));
  as_eigen(m) = e;
  return m;
}

}  // namespace kpca
