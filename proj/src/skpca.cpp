#include "kpca/skpca.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigen_interop.hpp"
#include "kpca/errors.hpp"
#include "kpca/numerics.hpp"

namespace kpca {

bool MatrixRowStream::next(std::span<double> row) {
  if (cursor_ >= source_->rows()) return false;
  const auto src = source_->row(cursor_);
  std::copy(src.begin(), src.end(), row.begin());
  ++cursor_;
  return true;
}

SkpcaModel skpca_fit_stream(RowStream& rows, const KernelSpec& spec,
                            std::size_t m, std::size_t l, std::size_t k,
                            std::uint64_t seed) {
  if (k < 1) {
    throw ParamError("skpca_fit_stream: k must be >= 1");
  }
  RffMap map = rff_sample(rows.width(), m, spec.gamma, seed);
  FdSketch sketch(l, m);

  std::vector<double> row(rows.width());
  std::vector<double> features(m);
  std::uint64_t seen = 0;
  while (rows.next(row)) {
    rff_transform_row(map, row, features);
    sketch.insert(features);
    ++seen;
  }
  if (sketch.filled() < k) {
    throw RankError("skpca_fit_stream: k = " + std::to_string(k) +
                        " principal vectors requested but the sketch holds " +
                        std::to_string(sketch.filled()) + " rows after " +
                        std::to_string(seen) + " stream rows",
                    sketch.filled());
  }
  DenseMatrix basis = sketch.basis(k);
  return SkpcaModel{std::move(map), std::move(sketch), std::move(basis), k};
}

DenseMatrix skpca_transform(const SkpcaModel& model, const DenseMatrix& x) {
  if (x.cols() != model.map.input_dim()) {
    throw ShapeError("skpca_transform: input has " + std::to_string(x.cols()) +
                     " columns, model expects " +
                     std::to_string(model.map.input_dim()));
  }
  const auto features = rff_transform(model.map, x);
  DenseMatrix out(x.rows(), model.basis.cols());
  as_eigen(out).noalias() = as_eigen(features) * as_eigen(model.basis);
  return out;
}

DenseMatrix skpca_approx_gram(const SkpcaModel& model, const DenseMatrix& a) {
  const auto projected = skpca_transform(model, a);
  DenseMatrix gram(a.rows(), a.rows());
  const auto p = as_eigen(projected);
  as_eigen(gram).noalias() = p * p.transpose();
  return gram;
}

}  // namespace kpca
