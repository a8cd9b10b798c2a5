#pragma once

#include <cstdint>
#include <vector>

#include "kpca/kernel.hpp"
#include "kpca/matrix.hpp"
#include "kpca/rff.hpp"

namespace kpca {

// Randomized nonlinear component analysis: PCA on the random-Fourier
// feature matrix. The basis diagonalizes the covariance of mean-centered
// feature rows.
struct RncaModel {
  RffMap map;
  std::vector<double> mean;       // feature-space mean, length m
  DenseMatrix basis;              // m x k, orthonormal columns
  std::vector<double> variances;  // descending, nonnegative
};

RncaModel rnca_fit(const DenseMatrix& a, const KernelSpec& spec,
                   std::size_t m, std::size_t k, std::uint64_t seed);

// (psi(x) - mean) * basis, one k-vector per input row.
DenseMatrix rnca_transform(const RncaModel& model, const DenseMatrix& x);

// Psi Psi^T, the uncentered kernel approximation; verification only.
DenseMatrix rnca_approx_gram(const RffMap& map, const DenseMatrix& a);

}  // namespace kpca
