#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kpca/matrix.hpp"

namespace kpca {

struct LabeledDataset {
  DenseMatrix features;
  std::vector<int> labels;  // raw class ids; -1/+1 after filter_binary
  std::string name;
  std::map<int, int> class_map;  // original class -> stored label
};

// IDX image + label pair (big-endian magics 0x00000803 / 0x00000801).
// Pixels are scaled to [0, 1].
LabeledDataset load_mnist(const std::string& images_path,
                          const std::string& labels_path);

// Binary batches of 3073-byte records: 1 label byte, then 3072 pixel bytes
// (R, G, B planes). Pixels scaled to [0, 1].
LabeledDataset load_cifar(std::span<const std::string> batch_paths);

// Plain-text numeric table. delimiter ' ' splits on any whitespace run;
// any other delimiter splits literally. Empty labels_path means the label
// is the trailing field of each feature row.
LabeledDataset load_table(const std::string& features_path,
                          const std::string& labels_path, char delimiter);

// Keeps the two listed classes, mapping positive_class -> +1 and
// negative_class -> -1. The positive class is the pair's first element
// (the precision/recall convention downstream).
LabeledDataset filter_binary(const LabeledDataset& ds, int positive_class,
                             int negative_class);

struct SplitSpec {
  double test_fraction = 0.25;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct TrainTestSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// Disjoint, exhaustive, deterministic per seed. Stratified splitting keeps
// each class's test share within one instance of test_fraction and both
// classes present on both sides. Row order within each side follows the
// source dataset.
TrainTestSplit split(const LabeledDataset& ds, const SplitSpec& spec);

// Per-feature standardization, fit on training rows only. Columns with no
// variance keep scale 1 so apply() leaves them centered but unscaled.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;
};

Scaler scaler_fit(const DenseMatrix& train);
DenseMatrix scaler_apply(const Scaler& scaler, const DenseMatrix& x);

// Two spherical Gaussian blobs (unit variance) with centers `separation`
// apart along the first axis; labels +1 / -1.
LabeledDataset synth_two_clusters(std::size_t n, std::size_t d,
                                  double separation, std::uint64_t seed);

// Concentric circles (radius 1 -> +1, radius 2 -> -1) with Gaussian radial
// noise: linearly inseparable in the plane, separable through an RBF map.
LabeledDataset synth_circles(std::size_t n, double noise, std::uint64_t seed);

}  // namespace kpca
