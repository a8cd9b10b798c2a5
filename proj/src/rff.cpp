#include "kpca/rff.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "eigen_interop.hpp"
#include "kpca/errors.hpp"
#include "kpca/rng.hpp"

namespace kpca {

RffMap rff_sample(std::size_t d, std::size_t m, double gamma,
                  std::uint64_t seed) {
  if (d < 1 || m < 1) {
    throw ParamError("rff_sample: d and m must be >= 1");
  }
  if (!(gamma > 0.0)) {
    throw ParamError("rff_sample: gamma must be positive, got " +
                     std::to_string(gamma));
  }
  RngEngine eng(seed);
  const double freq_scale = std::sqrt(2.0 * gamma);

  RffMap map;
  map.m = m;
  map.gamma = gamma;
  map.seed = seed;
  map.frequencies = DenseMatrix(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      map.frequencies(i, j) = freq_scale * gaussian(eng);
    }
  }
  map.phases.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    map.phases[i] = uniform_real(eng, 0.0, 2.0 * std::numbers::pi);
  }
  return map;
}

DenseMatrix rff_transform(const RffMap& map, const DenseMatrix& x) {
  if (x.cols() != map.input_dim()) {
    throw ShapeError("rff_transform: input has " + std::to_string(x.cols()) +
                     " columns, map expects " +
                     std::to_string(map.input_dim()));
  }
  const double amplitude = std::sqrt(2.0 / static_cast<double>(map.m));
  DenseMatrix out(x.rows(), map.m);
  auto proj = as_eigen(out);
  proj.noalias() = as_eigen(x) * as_eigen(map.frequencies).transpose();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < map.m; ++j) {
      out(i, j) = amplitude * std::cos(out(i, j) + map.phases[j]);
    }
  }
  return out;
}

void rff_transform_row(const RffMap& map, std::span<const double> row,
                       std::span<double> out) {
  if (row.size() != map.input_dim() || out.size() != map.m) {
    throw ShapeError("rff_transform_row: row length " +
                     std::to_string(row.size()) + ", out length " +
                     std::to_string(out.size()));
  }
  const double amplitude = std::sqrt(2.0 / static_cast<double>(map.m));
  const auto freq = as_eigen(map.frequencies);
  Eigen::Map<const Eigen::VectorXd> rv(row.data(), row.size());
  Eigen::Map<Eigen::VectorXd> ov(out.data(), out.size());
  ov.noalias() = freq * rv;
  for (std::size_t j = 0; j < map.m; ++j) {
    out[j] = amplitude * std::cos(out[j] + map.phases[j]);
  }
}

}  // namespace kpca
