#include "kpca/nystrom.hpp"

#include <cmath>
#include <string>

#include "kpca/errors.hpp"
#include "kpca/numerics.hpp"
#include "kpca/rng.hpp"

namespace kpca {

std::vector<std::size_t> sample_landmarks(std::size_t n, std::size_t m,
                                          std::uint64_t seed) {
  if (m < 1 || m > n) {
    throw ParamError("sample_landmarks: m = " + std::to_string(m) +
                     " outside [1, " + std::to_string(n) + "]");
  }
  RngEngine eng(seed);
  return sample_without_replacement(n, m, eng);
}

NystromModel nystrom_fit(const DenseMatrix& a, const KernelSpec& spec,
                         std::size_t m, std::uint64_t seed) {
  const auto indices = sample_landmarks(a.rows(), m, seed);
  NystromModel model{a.select_rows(indices), spec, {}, {}, 0, seed};

  const auto block = gram_matrix(spec, model.landmarks);
  const auto eig = sym_eig(block);
  const double cutoff = 1e-10 * std::max(0.0, eig.eigenvalues.front());

  std::size_t r = 0;
  while (r < m && eig.eigenvalues[r] > cutoff) ++r;
  if (r == 0) {
    throw DegenerateError(
        "nystrom_fit: landmark kernel block has no eigenvalue above cutoff");
  }

  model.rank_used = r;
  model.w_eigvals.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + r);
  model.w_eigvecs = DenseMatrix(m, r);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      model.w_eigvecs(i, j) = eig.eigenvectors(i, j);
    }
  }
  return model;
}

DenseMatrix nystrom_features(const NystromModel& model, const DenseMatrix& x,
                             std::size_t k) {
  if (k < 1 || k > model.rank_used) {
    throw RankError("nystrom_features: k = " + std::to_string(k) +
                        " exceeds usable rank " +
                        std::to_string(model.rank_used),
                    model.rank_used);
  }
  // Scale the kept eigenvector columns by lambda^{-1/2} once, then one
  // cross-kernel product maps every row.
  DenseMatrix scaled(model.w_eigvecs.rows(), k);
  for (std::size_t j = 0; j < k; ++j) {
    const double s = 1.0 / std::sqrt(model.w_eigvals[j]);
    for (std::size_t i = 0; i < scaled.rows(); ++i) {
      scaled(i, j) = model.w_eigvecs(i, j) * s;
    }
  }
  return matmul(cross_gram(model.kernel, x, model.landmarks), scaled);
}

DenseMatrix nystrom_approx_gram(const NystromModel& model,
                                const DenseMatrix& a) {
  const auto c = cross_gram(model.kernel, a, model.landmarks);
  const auto block = gram_matrix(model.kernel, model.landmarks);
  return matmul(matmul(c, pinv(block)), c.transposed());
}

}  // namespace kpca
