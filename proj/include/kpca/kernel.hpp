#pragma once

#include <span>
#include <vector>

#include "kpca/matrix.hpp"

namespace kpca {

enum class KernelFamily { rbf };

// Shift-invariant kernel description. Only the RBF family is supported:
// chi(x, y) = exp(-gamma * |x - y|^2).
struct KernelSpec {
  KernelSpec(KernelFamily f, double g);
  static KernelSpec rbf(double gamma) { return {KernelFamily::rbf, gamma}; }

  KernelFamily family;
  double gamma;  // > 0, inverse squared length-scale
};

// Scale-aware bandwidth default: 1 / (d * mean per-feature variance).
// Falls back to 1/d when the data has no variance.
double default_gamma(const DenseMatrix& data);

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

// n x n matrix of pairwise kernel values over the rows of `a`; symmetric,
// PSD, unit diagonal for RBF.
DenseMatrix gram_matrix(const KernelSpec& spec, const DenseMatrix& a);

// a.rows() x b.rows() matrix with entry (i, j) = chi(a_i, b_j).
DenseMatrix cross_gram(const KernelSpec& spec, const DenseMatrix& a,
                       const DenseMatrix& b);

// Exact (uncentered) kernel PCA: top-k eigenpairs of the Gram matrix with
// dual coefficients scaled by 1/sqrt(lambda), so each principal direction
// has unit norm in feature space.
struct ExactKpcaModel {
  DenseMatrix train_data;
  KernelSpec kernel;
  std::vector<double> eigenvalues;  // descending, strictly positive
  DenseMatrix alphas;               // n x k dual coefficients
};

ExactKpcaModel exact_kpca_fit(const DenseMatrix& a, const KernelSpec& spec,
                              std::size_t k);

// m x k feature matrix; row j holds the projections of x_j onto the k
// principal directions.
DenseMatrix exact_kpca_project(const ExactKpcaModel& model,
                               const DenseMatrix& x);

}  // namespace kpca
