#include "kpca/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "eigen_interop.hpp"
#include "kpca/errors.hpp"
#include "kpca/rng.hpp"

namespace kpca {

namespace {

constexpr std::size_t kMaxSweeps = 2000;
constexpr double kRelObjectiveTol = 1e-6;
constexpr double kGradientNoise = 1e-12;

void check_labels(const std::vector<int>& y) {
  bool pos = false;
  bool neg = false;
  for (int label : y) {
    if (label == 1) {
      pos = true;
    } else if (label == -1) {
      neg = true;
    } else {
      throw ParamError("svm labels must be -1 or +1, got " +
                       std::to_string(label));
    }
  }
  if (!pos || !neg) {
    throw DegenerateError("svm_train: only one class present");
  }
}

bool has_both_classes(const std::vector<int>& y,
                      const std::vector<std::size_t>& rows) {
  bool pos = false;
  bool neg = false;
  for (std::size_t i : rows) {
    (y[i] == 1 ? pos : neg) = true;
  }
  return pos && neg;
}

}  // namespace

SvmModel svm_train(const DenseMatrix& x, const std::vector<int>& y, double c) {
  const std::size_t n = x.rows();
  if (y.size() != n) {
    throw ShapeError("svm_train: " + std::to_string(n) + " rows but " +
                     std::to_string(y.size()) + " labels");
  }
  if (n < 2) {
    throw ParamError("svm_train: need at least 2 rows");
  }
  if (!std::isfinite(c) || c <= 0.0) {
    throw ParamError("svm_train: C must be positive and finite");
  }
  check_labels(y);

  const std::size_t d = x.cols();
  const auto data = as_eigen(x);
  // Bias rides along as an appended constant-1 feature: w has d+1 entries.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd qii(n);
  for (std::size_t i = 0; i < n; ++i) {
    qii(i) = data.row(i).squaredNorm() + 1.0;
  }

  // Dual coordinate descent, fixed sweep order for determinism; stop when
  // the primal objective settles or the sweep budget runs out.
  double prev_objective = std::numeric_limits<double>::infinity();
  for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const double margin = data.row(i).dot(w.head(d)) + w(d);
      const double g = y[i] * margin - 1.0;
      double pg = g;
      if (alpha(i) <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha(i) >= c) {
        pg = std::max(g, 0.0);
      }
      if (std::abs(pg) > kGradientNoise) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - g / qii(i), 0.0, c);
        const double step = (alpha(i) - old) * y[i];
        if (step != 0.0) {
          w.head(d) += step * data.row(i).transpose();
          w(d) += step;
        }
      }
    }
    double objective = 0.5 * w.squaredNorm();
    for (std::size_t i = 0; i < n; ++i) {
      const double margin = data.row(i).dot(w.head(d)) + w(d);
      objective += c * std::max(0.0, 1.0 - y[i] * margin);
    }
    if (std::abs(prev_objective - objective) <=
        kRelObjectiveTol * std::max(1.0, std::abs(objective))) {
      break;
    }
    prev_objective = objective;
  }

  SvmModel model;
  model.weights.assign(w.data(), w.data() + d);
  model.bias = w(d);
  model.c_used = c;
  return model;
}

std::vector<int> svm_predict(const SvmModel& model, const DenseMatrix& x) {
  if (x.cols() != model.weights.size()) {
    throw ShapeError("svm_predict: input has " + std::to_string(x.cols()) +
                     " columns, model expects " +
                     std::to_string(model.weights.size()));
  }
  Eigen::Map<const Eigen::VectorXd> w(model.weights.data(),
                                      static_cast<Eigen::Index>(
                                          model.weights.size()));
  std::vector<int> labels(x.rows());
  const auto data = as_eigen(x);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double score = data.row(i).dot(w) + model.bias;
    labels[i] = score < 0.0 ? -1 : 1;
  }
  return labels;
}

TuneResult tune_c(const DenseMatrix& x, const std::vector<int>& y,
                  double split_fraction, std::span<const double> grid,
                  std::uint64_t seed) {
  const std::size_t n = x.rows();
  if (y.size() != n) {
    throw ShapeError("tune_c: " + std::to_string(n) + " rows but " +
                     std::to_string(y.size()) + " labels");
  }
  if (grid.empty()) {
    throw ParamError("tune_c: empty C grid");
  }
  for (double c : grid) {
    if (!std::isfinite(c) || c <= 0.0) {
      throw ParamError("tune_c: C grid entries must be positive");
    }
  }
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw ParamError("tune_c: split_fraction must lie in (0, 1)");
  }
  if (n < 4) {
    throw ParamError("tune_c: need at least 4 rows to split");
  }

  std::size_t val_count =
      static_cast<std::size_t>(split_fraction * static_cast<double>(n) + 0.5);
  val_count = std::clamp<std::size_t>(val_count, 1, n - 1);

  RngEngine eng(seed);
  std::vector<std::size_t> val_rows;
  std::vector<std::size_t> train_rows;
  bool split_ok = false;
  for (int attempt = 0; attempt < 10 && !split_ok; ++attempt) {
    const auto order = shuffled_indices(n, eng);
    val_rows.assign(order.begin(),
                    order.begin() + static_cast<std::ptrdiff_t>(val_count));
    train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(val_count),
                      order.end());
    split_ok = has_both_classes(y, train_rows) && has_both_classes(y, val_rows);
  }
  if (!split_ok) {
    throw DegenerateError(
        "tune_c: no validation split with both classes after 10 attempts");
  }

  const auto x_train = x.select_rows(train_rows);
  const auto x_val = x.select_rows(val_rows);
  std::vector<int> y_train(train_rows.size());
  std::vector<int> y_val(val_rows.size());
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    y_train[i] = y[train_rows[i]];
  }
  for (std::size_t i = 0; i < val_rows.size(); ++i) {
    y_val[i] = y[val_rows[i]];
  }

  TuneResult result;
  double best_accuracy = -1.0;
  for (double c : grid) {
    const auto model = svm_train(x_train, y_train, c);
    const auto predicted = svm_predict(model, x_val);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y_val.size(); ++i) {
      if (predicted[i] == y_val[i]) ++correct;
    }
    const double accuracy =
        static_cast<double>(correct) / static_cast<double>(y_val.size());
    result.grid.emplace_back(c, accuracy);
    if (accuracy > best_accuracy ||
        (accuracy == best_accuracy && c < result.best_c)) {
      best_accuracy = accuracy;
      result.best_c = c;
    }
  }
  return result;
}

}  // namespace kpca
