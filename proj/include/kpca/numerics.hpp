#pragma once

#include <vector>

#include "kpca/matrix.hpp"

namespace kpca {

// Eigendecomposition of a symmetric matrix. Eigenvalues descending,
// eigenvector columns orthonormal, each column's first nonzero component
// nonnegative.
struct SymEigResult {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;  // n x n, column i pairs with eigenvalues[i]
};

// Thin SVD: m = U diag(s) V^T with r = min(rows, cols) columns in U and V.
// Singular values descending and nonnegative; the sign convention keys on
// U's columns (first nonzero component nonnegative) and flips V to match.
struct SvdResult {
  DenseMatrix u;                       // rows x r
  std::vector<double> singular_values; // length r
  DenseMatrix v;                       // cols x r
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

SymEigResult sym_eig(const DenseMatrix& m);

SvdResult svd(const DenseMatrix& m);

// Moore-Penrose pseudoinverse; singular values <= tol are treated as zero.
DenseMatrix pinv(const DenseMatrix& m, double tol);

// Default tolerance: max(rows, cols) * machine epsilon * largest singular value.
DenseMatrix pinv(const DenseMatrix& m);

double spectral_norm(const DenseMatrix& m);

double frobenius_norm(const DenseMatrix& m);

// Truncated-SVD reconstruction, Frobenius-optimal among rank-k matrices.
DenseMatrix best_rank_k(const DenseMatrix& m, std::size_t k);

}  // namespace kpca
