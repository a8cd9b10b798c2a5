#pragma once

#include <cstdint>
#include <vector>

#include "kpca/kernel.hpp"
#include "kpca/matrix.hpp"

namespace kpca {

// Low-rank kernel approximation built from m landmark rows sampled without
// replacement: K_tilde = K_{n,m} K_{m,m}^+ K_{m,n}.
struct NystromModel {
  DenseMatrix landmarks;          // m x d rows copied from the training set
  KernelSpec kernel;
  std::vector<double> w_eigvals;  // kept eigenvalues of the landmark block
  DenseMatrix w_eigvecs;          // m x r matching eigenvectors
  std::size_t rank_used = 0;
  std::uint64_t seed = 0;
};

// m distinct indices in [0, n), uniform without replacement, deterministic
// for a fixed seed.
std::vector<std::size_t> sample_landmarks(std::size_t n, std::size_t m,
                                          std::uint64_t seed);

// Eigendecomposes the m x m landmark Gram block, dropping eigenvalues below
// 1e-10 * lambda_max.
NystromModel nystrom_fit(const DenseMatrix& a, const KernelSpec& spec,
                         std::size_t m, std::uint64_t seed);

// Feature rows lambda^{-1/2} V^T [chi(landmark_j, x)]_j truncated to k
// columns; feature inner products approximate K_tilde entries.
DenseMatrix nystrom_features(const NystromModel& model, const DenseMatrix& x,
                             std::size_t k);

// The full n x n approximate Gram matrix; intended for small n only
// (bound verification). Applies the pseudoinverse literally.
DenseMatrix nystrom_approx_gram(const NystromModel& model,
                                const DenseMatrix& a);

}  // namespace kpca
