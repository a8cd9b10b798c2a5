#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kpca/matrix.hpp"

namespace kpca {

// Linear soft-margin SVM. The bias is folded into the weight vector during
// training via an appended constant-1 feature and stored separately here.
struct SvmModel {
  std::vector<double> weights;  // length = feature dimension
  double bias = 0.0;
  double c_used = 0.0;
};

// Minimizes 1/2 |w|^2 + C * sum_i hinge(y_i (w . x_i + b)) by dual
// coordinate descent with fixed-order sweeps; deterministic for fixed
// inputs. Labels must be -1 or +1 and both classes must appear.
SvmModel svm_train(const DenseMatrix& x, const std::vector<int>& y, double c);

// sign(w . x + b) per row; zero margin maps to +1.
std::vector<int> svm_predict(const SvmModel& model, const DenseMatrix& x);

struct TuneResult {
  double best_c = 0.0;
  std::vector<std::pair<double, double>> grid;  // (C, validation accuracy)
};

inline constexpr double kDefaultSplitFraction = 0.2;
inline constexpr double kDefaultCGrid[] = {0.01, 0.1, 1.0, 10.0, 100.0};

// Holds out `split_fraction` of the rows (random split, deterministic for
// fixed seed), trains on the rest for every C in the grid, and picks the C
// with the best validation accuracy; ties break toward smaller C. Splits
// that lose a class on either side are resampled up to 10 times.
TuneResult tune_c(const DenseMatrix& x, const std::vector<int>& y,
                  double split_fraction, std::span<const double> grid,
                  std::uint64_t seed);

}  // namespace kpca
