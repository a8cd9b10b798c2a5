#include "kpca/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "eigen_interop.hpp"
#include "kpca/errors.hpp"

namespace kpca {

namespace {

void require_nonempty(const DenseMatrix& m, const char* op) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ShapeError(std::string(op) + ": empty matrix");
  }
}

// Make the first non-negligible component of each column nonnegative.
// Column scale sets what counts as negligible, so the convention is stable
// under tiny rounding noise in leading entries.
void fix_column_signs(EMatrix& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double peak = v.col(j).cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double x = v(i, j);
      if (std::abs(x) > 1e-9 * peak) {
        if (x < 0.0) v.col(j) = -v.col(j);
        break;
      }
    }
  }
}

// Same convention keyed on U; V flips with it to keep U S V^T intact.
void fix_pair_signs(EMatrix& u, EMatrix& v) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double peak = u.col(j).cwiseAbs().maxCoeff();
    if (peak == 0.0) continue;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double x = u(i, j);
      if (std::abs(x) > 1e-9 * peak) {
        if (x < 0.0) {
          u.col(j) = -u.col(j);
          v.col(j) = -v.col(j);
        }
        break;
      }
    }
  }
}

Eigen::BDCSVD<EMatrix> thin_svd(const DenseMatrix& m, unsigned options) {
  Eigen::BDCSVD<EMatrix> solver(as_eigen(m), options);
  if (solver.info() != Eigen::Success) {
    throw Error("svd: decomposition failed to converge");
  }
  return solver;
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  DenseMatrix out(a.rows(), b.cols());
  as_eigen(out).noalias() = as_eigen(a) * as_eigen(b);
  return out;
}

SymEigResult sym_eig(const DenseMatrix& m) {
  require_nonempty(m, "sym_eig");
  if (m.rows() != m.cols()) {
    throw ShapeError("sym_eig: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  }
  const auto e = as_eigen(m);
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < e.cols(); ++j) {
      if (std::abs(e(i, j) - e(j, i)) > 1e-10 * scale) {
        throw ParamError("sym_eig: input asymmetric at (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      }
    }
  }

  EMatrix sym = 0.5 * (e + e.transpose());
  Eigen::SelfAdjointEigenSolver<EMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error("sym_eig: eigensolver failed to converge");
  }

  // Eigen returns ascending order; flip to descending.
  const Eigen::Index n = sym.rows();
  SymEigResult out;
  out.eigenvalues.resize(n);
  EMatrix vectors(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()(n - 1 - i);
    vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  fix_column_signs(vectors);
  out.eigenvectors = to_dense(vectors);
  return out;
}

SvdResult svd(const DenseMatrix& m) {
  require_nonempty(m, "svd");
  auto solver = thin_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  EMatrix u = solver.matrixU();
  EMatrix v = solver.matrixV();
  fix_pair_signs(u, v);

  SvdResult out;
  out.u = to_dense(u);
  out.v = to_dense(v);
  const auto& s = solver.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  return out;
}

DenseMatrix pinv(const DenseMatrix& m, double tol) {
  require_nonempty(m, "pinv");
  if (!(tol >= 0.0)) {
    throw ParamError("pinv: tolerance must be >= 0");
  }
  auto solver = thin_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = solver.singularValues();
  Eigen::VectorXd inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    inv(i) = s(i) > tol ? 1.0 / s(i) : 0.0;
  }
  EMatrix result =
      solver.matrixV() * inv.asDiagonal() * solver.matrixU().transpose();
  return to_dense(result);
}

DenseMatrix pinv(const DenseMatrix& m) {
  require_nonempty(m, "pinv");
  const double smax = spectral_norm(m);
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() * smax;
  return pinv(m, tol);
}

double spectral_norm(const DenseMatrix& m) {
  require_nonempty(m, "spectral_norm");
  Eigen::BDCSVD<EMatrix> solver(as_eigen(m));
  return solver.singularValues().size() > 0 ? solver.singularValues()(0) : 0.0;
}

double frobenius_norm(const DenseMatrix& m) {
  double sum = 0.0;
  for (double x : m.values()) sum += x * x;
  return std::sqrt(sum);
}

DenseMatrix best_rank_k(const DenseMatrix& m, std::size_t k) {
  require_nonempty(m, "best_rank_k");
  const std::size_t r = std::min(m.rows(), m.cols());
  if (k < 1 || k > r) {
    throw ParamError("best_rank_k: k = " + std::to_string(k) +
                     " outside [1, " + std::to_string(r) + "]");
  }
  auto solver = thin_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto ki = static_cast<Eigen::Index>(k);
  EMatrix rec = solver.matrixU().leftCols(ki) *
                solver.singularValues().head(ki).asDiagonal() *
                solver.matrixV().leftCols(ki).transpose();
  return to_dense(rec);
}

}  // namespace kpca
