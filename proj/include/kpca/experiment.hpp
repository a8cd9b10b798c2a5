#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kpca/dataset.hpp"
#include "kpca/matrix.hpp"
#include "kpca/method.hpp"
#include "kpca/metrics.hpp"
#include "kpca/svm.hpp"

namespace kpca {

// One benchmark run: load -> split -> scale -> extract features -> tune C
// -> train SVM -> score on the test set.
struct ExperimentConfig {
  // Dataset key: mnist, cifar, har, isolet, two_clusters, circles, or
  // table (generic text table via feature/label path overrides).
  std::string dataset = "two_clusters";
  std::string data_root = "data";

  // Explicit file overrides for dataset = table; ignored otherwise.
  std::string table_features;
  std::string table_labels;  // empty = trailing inline label column
  char table_delimiter = ',';

  // Class pair (original labels); positive class first. Negative values
  // mean "use the dataset's conventional pair". Ignored for synthetics.
  int class_positive = -1;
  int class_negative = -1;

  Method method = Method::skpca;
  std::size_t feature_count = 2;  // k
  std::size_t rff_dim = 256;      // m: RFF dimension, or landmark count
  std::size_t sketch_size = 64;   // l (skpca only)
  double gamma = 0.0;             // <= 0 means auto (variance heuristic)
  std::vector<double> c_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  double validation_fraction = 0.2;  // tune_c holdout share

  // Train/test split for datasets without an official partition
  // (synthetics and `table`); its seed also drives synthetic generation.
  SplitSpec split;

  std::vector<std::uint64_t> seeds = {0};
  std::string output_path;

  // Synthetic-data shape parameters.
  std::size_t synth_n = 400;
  std::size_t synth_d = 5;
  double synth_separation = 6.0;
  double synth_noise = 0.1;

  std::size_t exact_limit = 3000;  // exact KPCA gate on training rows
  std::size_t workers = 1;         // sweep parallelism
};

// Parses a key=value config file ('#' comments, blank lines ignored).
// Unknown keys are rejected.
ExperimentConfig parse_config_file(const std::string& path);

// Applies one key=value override (same keys as the config file).
void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value);

struct EvalReport {
  Method method = Method::skpca;
  std::string dataset;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t l = 0;
  double gamma = 0.0;
  double c = 0.0;  // tuned C used for the final model
  std::uint64_t seed = 0;
  ConfusionCounts counts;
  Metrics metrics;
  double fit_seconds = 0.0;        // extractor fitting
  double transform_seconds = 0.0;  // feature generation for train + test
  double train_seconds = 0.0;      // C tuning + final SVM training
};

// Loaded, filtered, split, standardized data with the resolved bandwidth;
// shared across sweep points.
struct PreparedData {
  std::string dataset;
  DenseMatrix x_train;
  DenseMatrix x_test;
  std::vector<int> y_train;
  std::vector<int> y_test;
  double gamma = 0.0;
};

// Stages "load" (covers filtering and splitting), "scale", "gamma";
// errors carry the stage label.
PreparedData prepare_data(const ExperimentConfig& cfg);

// Salt XORed into the run seed for the C-tuning split, keeping it
// decoupled from the extractor's random stream (which consumes the run
// seed directly). Exported so a run can be recomposed from the public
// pieces: tune_c(..., seed ^ kTuneSeedSalt).
inline constexpr std::uint64_t kTuneSeedSalt = 0xa3c59ac2f0b9311bull;

// Stages "fit", "transform", "tune", "train", "predict", "score".
EvalReport evaluate_point(const PreparedData& data,
                          const ExperimentConfig& cfg, std::size_t k,
                          std::uint64_t seed);

// prepare_data + evaluate_point at cfg.feature_count and cfg.seeds.front().
EvalReport run_experiment(const ExperimentConfig& cfg);

struct SweepEntry {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;  // stage-labeled reason when failed
  EvalReport report;  // valid when !failed
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // full k x seed grid, in grid order

  std::size_t failure_count() const;
};

// One entry per (k, seed); failures are recorded and the sweep continues.
// Points run on cfg.workers threads; entry order is grid order regardless.
SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<std::size_t>& k_grid);

// CSV with header method,k,seed,accuracy,precision,recall,fscore,fit_s,
// train_s; one row per successful sweep entry. fit_s = fit + transform
// time, train_s = tune + train time. Metric columns are deterministic for
// fixed config and seeds; timing columns are not.
void write_sweep_csv(const SweepResult& sweep, const std::string& path);

struct SweepRow {
  std::string method;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
  double fit_s = 0.0;
  double train_s = 0.0;
};

std::vector<SweepRow> parse_sweep_csv(const std::string& path);

// Structured single-run record (JSON).
void write_report_json(const EvalReport& report, const std::string& path);

// CSV of x1,x2,label for the test set projected onto exactly two features;
// any other cfg.feature_count is rejected.
void dump_projection(const ExperimentConfig& cfg, const std::string& path);

}  // namespace kpca
