#include "kpca/metrics.hpp"

#include <string>

#include "kpca/errors.hpp"

namespace kpca {

ConfusionCounts count_confusion(const std::vector<int>& truth,
                                const std::vector<int>& predicted) {
  if (truth.size() != predicted.size()) {
    throw ShapeError("count_confusion: " + std::to_string(truth.size()) +
                     " true labels, " + std::to_string(predicted.size()) +
                     " predictions");
  }
  ConfusionCounts counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != 1 && truth[i] != -1) {
      throw ParamError("count_confusion: labels must be -1 or +1");
    }
    if (predicted[i] != 1 && predicted[i] != -1) {
      throw ParamError("count_confusion: predictions must be -1 or +1");
    }
    if (truth[i] == 1) {
      ++(predicted[i] == 1 ? counts.tp : counts.fn);
    } else {
      ++(predicted[i] == -1 ? counts.tn : counts.fp);
    }
  }
  return counts;
}

Metrics metrics_from_counts(const ConfusionCounts& counts) {
  const std::size_t total = counts.total();
  if (total == 0) {
    throw ParamError("metrics_from_counts: empty counts");
  }
  Metrics m;
  m.accuracy = static_cast<double>(counts.tp + counts.tn) /
               static_cast<double>(total);
  if (counts.tp + counts.fp > 0) {
    m.precision = static_cast<double>(counts.tp) /
                  static_cast<double>(counts.tp + counts.fp);
  } else {
    m.degenerate = true;
  }
  if (counts.tp + counts.fn > 0) {
    m.recall = static_cast<double>(counts.tp) /
               static_cast<double>(counts.tp + counts.fn);
  } else {
    m.degenerate = true;
  }
  if (m.precision + m.recall > 0.0) {
    m.fscore = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  } else {
    m.degenerate = true;
  }
  return m;
}

}  // namespace kpca
