#include "kpca/rnca.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "eigen_interop.hpp"
#include "kpca/errors.hpp"
#include "kpca/numerics.hpp"

namespace kpca {

RncaModel rnca_fit(const DenseMatrix& a, const KernelSpec& spec,
                   std::size_t m, std::size_t k, std::uint64_t seed) {
  const std::size_t n = a.rows();
  if (n < 2) {
    throw ParamError("rnca_fit: need at least 2 rows");
  }
  if (k < 1 || k > m) {
    throw ParamError("rnca_fit: k = " + std::to_string(k) + " outside [1, " +
                     std::to_string(m) + "]");
  }

  RncaModel model;
  model.map = rff_sample(a.cols(), m, spec.gamma, seed);
  auto features = rff_transform(model.map, a);

  model.mean.resize(m);
  auto f = as_eigen(features);
  const Eigen::RowVectorXd mean = f.colwise().mean();
  for (std::size_t j = 0; j < m; ++j) model.mean[j] = mean(j);
  f.rowwise() -= mean;

  // Covariance at m x m keeps the decomposition independent of n.
  DenseMatrix cov(m, m);
  as_eigen(cov).noalias() = (f.transpose() * f) / static_cast<double>(n);
  const auto eig = sym_eig(cov);

  model.basis = DenseMatrix(m, k);
  model.variances.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    model.variances[j] = std::max(0.0, eig.eigenvalues[j]);
    for (std::size_t i = 0; i < m; ++i) {
      model.basis(i, j) = eig.eigenvectors(i, j);
    }
  }
  return model;
}

DenseMatrix rnca_transform(const RncaModel& model, const DenseMatrix& x) {
  if (x.cols() != model.map.input_dim()) {
    throw ShapeError("rnca_transform: input has " + std::to_string(x.cols()) +
                     " columns, model expects " +
                     std::to_string(model.map.input_dim()));
  }
  auto features = rff_transform(model.map, x);
  auto f = as_eigen(features);
  Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(),
                                            model.mean.size());
  f.rowwise() -= mean;

  DenseMatrix out(x.rows(), model.basis.cols());
  as_eigen(out).noalias() = f * as_eigen(model.basis);
  return out;
}

DenseMatrix rnca_approx_gram(const RffMap& map, const DenseMatrix& a) {
  const auto features = rff_transform(map, a);
  DenseMatrix gram(a.rows(), a.rows());
  const auto f = as_eigen(features);
  as_eigen(gram).noalias() = f * f.transpose();
  return gram;
}

}  // namespace kpca
