#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kpca/matrix.hpp"

namespace kpca {

// Random Fourier feature map for the RBF kernel. With frequencies drawn
// from N(0, 2*gamma) per entry and phases from Unif[0, 2pi), the feature
// psi(x)_i = sqrt(2/m) * cos(freq_i . x + phase_i) satisfies
// E[psi(x)^T psi(y)] = chi(x, y).
struct RffMap {
  DenseMatrix frequencies;     // m x d, one frequency vector per row
  std::vector<double> phases;  // length m, in [0, 2pi)
  std::size_t m = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return frequencies.cols(); }
};

// Deterministic for a fixed seed (mt19937_64 + Box-Muller; see README).
RffMap rff_sample(std::size_t d, std::size_t m, double gamma,
                  std::uint64_t seed);

// n x m feature matrix for the rows of x.
DenseMatrix rff_transform(const RffMap& map, const DenseMatrix& x);

// Single-row transform used by the streaming path; `out` has length m.
void rff_transform_row(const RffMap& map, std::span<const double> row,
                       std::span<double> out);

}  // namespace kpca
