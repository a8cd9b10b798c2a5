#include "kpca/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "kpca/errors.hpp"
#include "kpca/kernel.hpp"
#include "kpca/nystrom.hpp"
#include "kpca/rnca.hpp"
#include "kpca/skpca.hpp"

namespace kpca {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
auto run_stage(const char* label, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error("stage " + std::string(label) + ": " + e.what());
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || value.find('-') != std::string::npos) {
    throw ParamError("config: bad value '" + value + "' for " + key);
  }
  return parsed;
}

double parse_real(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double parsed = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParamError("config: bad value '" + value + "' for " + key);
  }
  return parsed;
}

int parse_int(const std::string& value, const std::string& key) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const long parsed = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ParamError("config: bad value '" + value + "' for " + key);
  }
  return static_cast<int>(parsed);
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParamError("config: bad value '" + value + "' for " + key);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string::size_type pos = 0;
  while (pos <= value.size()) {
    const auto next = value.find(',', pos);
    const auto item = value.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!item.empty()) items.push_back(item);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return items;
}

std::string dataset_path(const std::string& root, const std::string& tail) {
  return root.empty() ? tail : root + "/" + tail;
}

// Environment override for the dataset root directory.
std::string resolved_root(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("KPCA_DATA_ROOT");
      env != nullptr && env[0] != '\0') {
    return env;
  }
  return cfg.data_root;
}

struct ClassPair {
  int positive;
  int negative;
};

ClassPair class_pair(const ExperimentConfig& cfg, int default_positive,
                     int default_negative) {
  if (cfg.class_positive != cfg.class_negative) {
    return {cfg.class_positive, cfg.class_negative};
  }
  return {default_positive, default_negative};
}

TrainTestSplit load_dataset(const ExperimentConfig& cfg) {
  const std::string root = resolved_root(cfg);
  if (cfg.dataset == "two_clusters") {
    const auto ds = synth_two_clusters(cfg.synth_n, cfg.synth_d,
                                       cfg.synth_separation, cfg.split.seed);
    return split(ds, cfg.split);
  }
  if (cfg.dataset == "circles") {
    const auto ds = synth_circles(cfg.synth_n, cfg.synth_noise,
                                  cfg.split.seed);
    return split(ds, cfg.split);
  }
  if (cfg.dataset == "table") {
    if (cfg.table_features.empty()) {
      throw ParamError("dataset 'table' needs table_features");
    }
    auto ds = load_table(cfg.table_features, cfg.table_labels,
                         cfg.table_delimiter);
    if (cfg.class_positive != cfg.class_negative) {
      ds = filter_binary(ds, cfg.class_positive, cfg.class_negative);
    }
    return split(ds, cfg.split);
  }
  if (cfg.dataset == "mnist") {
    const auto pair = class_pair(cfg, 1, 7);
    auto train = load_mnist(dataset_path(root, "mnist/train-images-idx3-ubyte"),
                            dataset_path(root, "mnist/train-labels-idx1-ubyte"));
    auto test = load_mnist(dataset_path(root, "mnist/t10k-images-idx3-ubyte"),
                           dataset_path(root, "mnist/t10k-labels-idx1-ubyte"));
    return {filter_binary(train, pair.positive, pair.negative),
            filter_binary(test, pair.positive, pair.negative)};
  }
  if (cfg.dataset == "cifar") {
    const auto pair = class_pair(cfg, 7, 8);
    std::vector<std::string> train_paths;
    for (int b = 1; b <= 5; ++b) {
      train_paths.push_back(dataset_path(
          root, "cifar-10-batches-bin/data_batch_" + std::to_string(b) +
                    ".bin"));
    }
    const std::vector<std::string> test_paths = {
        dataset_path(root, "cifar-10-batches-bin/test_batch.bin")};
    return {filter_binary(load_cifar(train_paths), pair.positive,
                          pair.negative),
            filter_binary(load_cifar(test_paths), pair.positive,
                          pair.negative)};
  }
  if (cfg.dataset == "har") {
    const auto pair = class_pair(cfg, 1, 4);
    auto train = load_table(dataset_path(root, "har/train/X_train.txt"),
                            dataset_path(root, "har/train/y_train.txt"), ' ');
    auto test = load_table(dataset_path(root, "har/test/X_test.txt"),
                           dataset_path(root, "har/test/y_test.txt"), ' ');
    return {filter_binary(train, pair.positive, pair.negative),
            filter_binary(test, pair.positive, pair.negative)};
  }
  if (cfg.dataset == "isolet") {
    const auto pair = class_pair(cfg, 1, 15);
    auto train =
        load_table(dataset_path(root, "isolet/isolet1+2+3+4.data"), "", ',');
    auto test = load_table(dataset_path(root, "isolet/isolet5.data"), "", ',');
    return {filter_binary(train, pair.positive, pair.negative),
            filter_binary(test, pair.positive, pair.negative)};
  }
  throw ParamError("unknown dataset '" + cfg.dataset +
                   "' (expected mnist, cifar, har, isolet, two_clusters, "
                   "circles, or table)");
}

struct ExtractedFeatures {
  DenseMatrix train;
  DenseMatrix test;
  double fit_seconds = 0.0;
  double transform_seconds = 0.0;
};

ExtractedFeatures extract_features(const PreparedData& data,
                                   const ExperimentConfig& cfg, std::size_t k,
                                   std::uint64_t seed) {
  const auto spec = KernelSpec::rbf(data.gamma);
  ExtractedFeatures out;
  switch (cfg.method) {
    case Method::exact: {
      const auto t0 = Clock::now();
      const auto model = run_stage("fit", [&] {
        if (data.x_train.rows() > cfg.exact_limit) {
          throw ParamError(
              "exact KPCA gated at " + std::to_string(cfg.exact_limit) +
              " training rows, got " + std::to_string(data.x_train.rows()) +
              " (raise exact_limit to override)");
        }
        return exact_kpca_fit(data.x_train, spec, k);
      });
      out.fit_seconds = seconds_since(t0);
      const auto t1 = Clock::now();
      run_stage("transform", [&] {
        out.train = exact_kpca_project(model, data.x_train);
        out.test = exact_kpca_project(model, data.x_test);
        return 0;
      });
      out.transform_seconds = seconds_since(t1);
      break;
    }
    case Method::nystrom: {
      const auto t0 = Clock::now();
      const auto model = run_stage("fit", [&] {
        return nystrom_fit(data.x_train, spec, cfg.rff_dim, seed);
      });
      out.fit_seconds = seconds_since(t0);
      const auto t1 = Clock::now();
      run_stage("transform", [&] {
        out.train = nystrom_features(model, data.x_train, k);
        out.test = nystrom_features(model, data.x_test, k);
        return 0;
      });
      out.transform_seconds = seconds_since(t1);
      break;
    }
    case Method::rnca: {
      const auto t0 = Clock::now();
      const auto model = run_stage("fit", [&] {
        return rnca_fit(data.x_train, spec, cfg.rff_dim, k, seed);
      });
      out.fit_seconds = seconds_since(t0);
      const auto t1 = Clock::now();
      run_stage("transform", [&] {
        out.train = rnca_transform(model, data.x_train);
        out.test = rnca_transform(model, data.x_test);
        return 0;
      });
      out.transform_seconds = seconds_since(t1);
      break;
    }
    case Method::skpca: {
      const auto t0 = Clock::now();
      const auto model = run_stage("fit", [&] {
        MatrixRowStream stream(data.x_train);
        return skpca_fit_stream(stream, spec, cfg.rff_dim, cfg.sketch_size, k,
                                seed);
      });
      out.fit_seconds = seconds_since(t0);
      const auto t1 = Clock::now();
      run_stage("transform", [&] {
        out.train = skpca_transform(model, data.x_train);
        out.test = skpca_transform(model, data.x_test);
        return 0;
      });
      out.transform_seconds = seconds_since(t1);
      break;
    }
  }
  return out;
}

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open config " + path);
  }
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    // Trim around.
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    try {
      apply_config_override(cfg, key, value);
    } catch (const Error& e) {
      throw ParamError(path + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return cfg;
}

void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
  if (key == "dataset") {
    cfg.dataset = value;
  } else if (key == "data_root") {
    cfg.data_root = value;
  } else if (key == "table_features") {
    cfg.table_features = value;
  } else if (key == "table_labels") {
    cfg.table_labels = value;
  } else if (key == "table_delimiter") {
    if (value == "space") {
      cfg.table_delimiter = ' ';
    } else if (value.size() == 1) {
      cfg.table_delimiter = value[0];
    } else {
      throw ParamError("config: bad value '" + value +
                       "' for table_delimiter");
    }
  } else if (key == "method") {
    cfg.method = parse_method(value);
  } else if (key == "features") {
    cfg.feature_count = parse_u64(value, key);
  } else if (key == "rff_dim") {
    cfg.rff_dim = parse_u64(value, key);
  } else if (key == "sketch") {
    cfg.sketch_size = parse_u64(value, key);
  } else if (key == "gamma") {
    cfg.gamma = value == "auto" ? 0.0 : parse_real(value, key);
  } else if (key == "c_grid") {
    std::vector<double> grid;
    for (const auto& item : split_list(value)) {
      grid.push_back(parse_real(item, key));
    }
    if (grid.empty()) {
      throw ParamError("config: empty c_grid");
    }
    cfg.c_grid = std::move(grid);
  } else if (key == "validation_fraction") {
    cfg.validation_fraction = parse_real(value, key);
  } else if (key == "test_fraction") {
    cfg.split.test_fraction = parse_real(value, key);
  } else if (key == "split_seed") {
    cfg.split.seed = parse_u64(value, key);
  } else if (key == "stratified") {
    cfg.split.stratified = parse_bool(value, key);
  } else if (key == "seeds") {
    std::vector<std::uint64_t> seeds;
    for (const auto& item : split_list(value)) {
      seeds.push_back(parse_u64(item, key));
    }
    if (seeds.empty()) {
      throw ParamError("config: empty seeds");
    }
    cfg.seeds = std::move(seeds);
  } else if (key == "out") {
    cfg.output_path = value;
  } else if (key == "class_positive") {
    cfg.class_positive = parse_int(value, key);
  } else if (key == "class_negative") {
    cfg.class_negative = parse_int(value, key);
  } else if (key == "synth_n") {
    cfg.synth_n = parse_u64(value, key);
  } else if (key == "synth_d") {
    cfg.synth_d = parse_u64(value, key);
  } else if (key == "synth_separation") {
    cfg.synth_separation = parse_real(value, key);
  } else if (key == "synth_noise") {
    cfg.synth_noise = parse_real(value, key);
  } else if (key == "exact_limit") {
    cfg.exact_limit = parse_u64(value, key);
  } else if (key == "workers") {
    cfg.workers = parse_u64(value, key);
  } else {
    throw ParamError("config: unknown key '" + key + "'");
  }
}

PreparedData prepare_data(const ExperimentConfig& cfg) {
  auto loaded = run_stage("load", [&] { return load_dataset(cfg); });

  PreparedData data;
  data.dataset = cfg.dataset;
  run_stage("scale", [&] {
    const auto scaler = scaler_fit(loaded.train.features);
    data.x_train = scaler_apply(scaler, loaded.train.features);
    data.x_test = scaler_apply(scaler, loaded.test.features);
    return 0;
  });
  data.y_train = std::move(loaded.train.labels);
  data.y_test = std::move(loaded.test.labels);
  data.gamma = run_stage("gamma", [&] {
    return cfg.gamma > 0.0 ? cfg.gamma : default_gamma(data.x_train);
  });
  return data;
}

EvalReport evaluate_point(const PreparedData& data,
                          const ExperimentConfig& cfg, std::size_t k,
                          std::uint64_t seed) {
  EvalReport report;
  report.method = cfg.method;
  report.dataset = data.dataset;
  report.k = k;
  report.m = cfg.method == Method::exact ? 0 : cfg.rff_dim;
  report.l = cfg.method == Method::skpca ? cfg.sketch_size : 0;
  report.gamma = data.gamma;
  report.seed = seed;

  auto features = extract_features(data, cfg, k, seed);
  report.fit_seconds = features.fit_seconds;
  report.transform_seconds = features.transform_seconds;

  const auto t0 = Clock::now();
  const auto tuned = run_stage("tune", [&] {
    return tune_c(features.train, data.y_train, cfg.validation_fraction,
                  cfg.c_grid, seed ^ kTuneSeedSalt);
  });
  const auto model = run_stage("train", [&] {
    return svm_train(features.train, data.y_train, tuned.best_c);
  });
  report.train_seconds = seconds_since(t0);
  report.c = tuned.best_c;

  const auto predicted =
      run_stage("predict", [&] { return svm_predict(model, features.test); });
  run_stage("score", [&] {
    report.counts = count_confusion(data.y_test, predicted);
    report.metrics = metrics_from_counts(report.counts);
    return 0;
  });
  return report;
}

EvalReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw ParamError("run_experiment: empty seed list");
  }
  const auto data = prepare_data(cfg);
  return evaluate_point(data, cfg, cfg.feature_count, cfg.seeds.front());
}

std::size_t SweepResult::failure_count() const {
  std::size_t failures = 0;
  for (const auto& entry : entries) {
    if (entry.failed) ++failures;
  }
  return failures;
}

SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<std::size_t>& k_grid) {
  if (k_grid.empty()) {
    throw ParamError("run_sweep: empty k grid");
  }
  if (cfg.seeds.empty()) {
    throw ParamError("run_sweep: empty seed list");
  }
  const auto data = prepare_data(cfg);

  SweepResult sweep;
  sweep.entries.resize(k_grid.size() * cfg.seeds.size());
  for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
      auto& entry = sweep.entries[ki * cfg.seeds.size() + si];
      entry.k = k_grid[ki];
      entry.seed = cfg.seeds[si];
    }
  }

  const std::size_t workers =
      std::max<std::size_t>(1, std::min(cfg.workers, sweep.entries.size()));
  std::atomic<std::size_t> cursor{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= sweep.entries.size()) break;
      auto& entry = sweep.entries[i];
      try {
        entry.report = evaluate_point(data, cfg, entry.k, entry.seed);
      } catch (const Error& e) {
        entry.failed = true;
        entry.error = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& thread : pool) thread.join();
  }
  return sweep;
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot write " + path);
  }
  out << "method,k,seed,accuracy,precision,recall,fscore,fit_s,train_s\n";
  for (const auto& entry : sweep.entries) {
    if (entry.failed) continue;
    const auto& r = entry.report;
    out << method_name(r.method) << ',' << r.k << ',' << r.seed << ','
        << fixed6(r.metrics.accuracy) << ',' << fixed6(r.metrics.precision)
        << ',' << fixed6(r.metrics.recall) << ',' << fixed6(r.metrics.fscore)
        << ',' << fixed6(r.fit_seconds + r.transform_seconds) << ','
        << fixed6(r.train_seconds) << '\n';
  }
  if (!out) {
    throw FormatError("write failed for " + path);
  }
}

std::vector<SweepRow> parse_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line) ||
      line != "method,k,seed,accuracy,precision,recall,fscore,fit_s,train_s") {
    throw FormatError(path + ": missing or wrong CSV header");
  }
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string::size_type pos = 0;
    while (true) {
      const auto next = line.find(',', pos);
      fields.push_back(line.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (fields.size() != 9) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 9 fields, got " +
                        std::to_string(fields.size()));
    }
    auto num = [&](const std::string& field) {
      const char* begin = field.c_str();
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": non-numeric field '" + field + "'");
      }
      return value;
    };
    SweepRow row;
    row.method = fields[0];
    row.k = static_cast<std::size_t>(num(fields[1]));
    row.seed = static_cast<std::uint64_t>(num(fields[2]));
    row.accuracy = num(fields[3]);
    row.precision = num(fields[4]);
    row.recall = num(fields[5]);
    row.fscore = num(fields[6]);
    row.fit_s = num(fields[7]);
    row.train_s = num(fields[8]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_report_json(const EvalReport& report, const std::string& path) {
  nlohmann::json record;
  record["method"] = std::string(method_name(report.method));
  record["dataset"] = report.dataset;
  record["params"] = {{"k", report.k},      {"m", report.m},
                      {"l", report.l},      {"gamma", report.gamma},
                      {"c", report.c},      {"seed", report.seed}};
  record["counts"] = {{"tp", report.counts.tp},
                      {"fp", report.counts.fp},
                      {"tn", report.counts.tn},
                      {"fn", report.counts.fn}};
  record["metrics"] = {{"accuracy", report.metrics.accuracy},
                       {"precision", report.metrics.precision},
                       {"recall", report.metrics.recall},
                       {"fscore", report.metrics.fscore},
                       {"degenerate", report.metrics.degenerate}};
  record["timings"] = {{"fit_s", report.fit_seconds},
                       {"transform_s", report.transform_seconds},
                       {"train_s", report.train_seconds}};
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot write " + path);
  }
  out << record.dump(2) << '\n';
  if (!out) {
    throw FormatError("write failed for " + path);
  }
}

void dump_projection(const ExperimentConfig& cfg, const std::string& path) {
  if (cfg.feature_count != 2) {
    throw ParamError("dump_projection: feature_count must be 2, got " +
                     std::to_string(cfg.feature_count));
  }
  if (cfg.seeds.empty()) {
    throw ParamError("dump_projection: empty seed list");
  }
  const auto data = prepare_data(cfg);
  const auto features = extract_features(data, cfg, 2, cfg.seeds.front());

  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot write " + path);
  }
  out << "x1,x2,label\n";
  for (std::size_t i = 0; i < features.test.rows(); ++i) {
    out << fixed6(features.test(i, 0)) << ',' << fixed6(features.test(i, 1))
        << ',' << data.y_test[i] << '\n';
  }
  if (!out) {
    throw FormatError("write failed for " + path);
  }
}

}  // namespace kpca
