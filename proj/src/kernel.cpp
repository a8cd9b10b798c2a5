#include "kpca/kernel.hpp"

#include <cmath>
#include <string>

#include "kpca/errors.hpp"
#include "kpca/numerics.hpp"

namespace kpca {

namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

KernelSpec::KernelSpec(KernelFamily f, double g) : family(f), gamma(g) {
  if (!(gamma > 0.0)) {
    throw ParamError("KernelSpec: gamma must be positive, got " +
                     std::to_string(g));
  }
}

double default_gamma(const DenseMatrix& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n == 0 || d == 0) {
    throw ParamError("default_gamma: empty data");
  }
  double total_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += data(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = data(i, j) - mean;
      var += dev * dev;
    }
    total_var += var / static_cast<double>(n);
  }
  const double mean_var = total_var / static_cast<double>(d);
  if (mean_var <= 0.0) {
    return 1.0 / static_cast<double>(d);
  }
  return 1.0 / (static_cast<double>(d) * mean_var);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("kernel_eval: vectors of length " +
                     std::to_string(x.size()) + " and " +
                     std::to_string(y.size()));
  }
  return std::exp(-spec.gamma * squared_distance(x, y));
}

DenseMatrix gram_matrix(const KernelSpec& spec, const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) {
    throw ParamError("gram_matrix: empty input");
  }
  DenseMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v =
          std::exp(-spec.gamma * squared_distance(a.row(i), a.row(j)));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

DenseMatrix cross_gram(const KernelSpec& spec, const DenseMatrix& a,
                       const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("cross_gram: row dimension mismatch (" +
                     std::to_string(a.cols()) + " vs " +
                     std::to_string(b.cols()) + ")");
  }
  DenseMatrix k(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ri = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      k(i, j) = std::exp(-spec.gamma * squared_distance(ri, b.row(j)));
    }
  }
  return k;
}

ExactKpcaModel exact_kpca_fit(const DenseMatrix& a, const KernelSpec& spec,
                              std::size_t k) {
  const std::size_t n = a.rows();
  if (k < 1 || k > n) {
    throw ParamError("exact_kpca_fit: k = " + std::to_string(k) +
                     " outside [1, " + std::to_string(n) + "]");
  }
  const auto gram = gram_matrix(spec, a);
  const auto eig = sym_eig(gram);

  constexpr double kEigenvalueFloor = 1e-10;
  std::size_t usable = 0;
  while (usable < n && eig.eigenvalues[usable] > kEigenvalueFloor) ++usable;
  if (usable < k) {
    throw RankError("exact_kpca_fit: only " + std::to_string(usable) +
                        " eigenvalues above " +
                        std::to_string(kEigenvalueFloor) + ", requested " +
                        std::to_string(k),
                    usable);
  }

  ExactKpcaModel model{a, spec, {}, DenseMatrix(n, k)};
  model.eigenvalues.assign(eig.eigenvalues.begin(),
                           eig.eigenvalues.begin() + k);
  for (std::size_t j = 0; j < k; ++j) {
    const double scale = 1.0 / std::sqrt(eig.eigenvalues[j]);
    for (std::size_t i = 0; i < n; ++i) {
      model.alphas(i, j) = eig.eigenvectors(i, j) * scale;
    }
  }
  return model;
}

DenseMatrix exact_kpca_project(const ExactKpcaModel& model,
                               const DenseMatrix& x) {
  if (x.cols() != model.train_data.cols()) {
    throw ShapeError("exact_kpca_project: input has " +
                     std::to_string(x.cols()) + " columns, train data has " +
                     std::to_string(model.train_data.cols()));
  }
  return matmul(cross_gram(model.kernel, x, model.train_data), model.alphas);
}

}  // namespace kpca
