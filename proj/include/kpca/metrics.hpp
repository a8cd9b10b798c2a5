#pragma once

#include <cstddef>
#include <vector>

namespace kpca {

// Binary confusion counts; the positive class is the label +1.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts count_confusion(const std::vector<int>& truth,
                                const std::vector<int>& predicted);

// accuracy = (tp+tn)/total, precision = tp/(tp+fp), recall = tp/(tp+fn),
// fscore = 2PR/(P+R). A zero denominator yields 0 for that metric and sets
// `degenerate` instead of producing NaN.
struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  bool degenerate = false;
};

Metrics metrics_from_counts(const ConfusionCounts& counts);

}  // namespace kpca
