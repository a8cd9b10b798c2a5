#include "kpca/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "kpca/errors.hpp"
#include "kpca/rng.hpp"

namespace kpca {

namespace {

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open " + path);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes,
                        std::size_t offset, const std::string& path) {
  if (offset + 4 > bytes.size()) {
    throw FormatError(path + ": truncated at byte " + std::to_string(offset));
  }
  return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
         (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[offset + 3]);
}

std::string file_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  const std::size_t start = slash == std::string::npos ? 0 : slash + 1;
  const std::size_t dot = path.find_last_of('.');
  const std::size_t end =
      (dot == std::string::npos || dot <= start) ? path.size() : dot;
  return path.substr(start, end - start);
}

double parse_number(const std::string& token, const std::string& path,
                    std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(value)) {
    throw FormatError(path + ":" + std::to_string(line_no) +
                      ": non-numeric field '" + token + "'");
  }
  return value;
}

int to_class_id(double value, const std::string& path, std::size_t line_no) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9) {
    throw FormatError(path + ":" + std::to_string(line_no) +
                      ": label is not an integer");
  }
  return static_cast<int>(rounded);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line,
                                      char delimiter) {
  std::vector<std::string> fields;
  if (delimiter == ' ') {
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) {
      fields.push_back(token);
    }
  } else {
    std::string::size_type pos = 0;
    while (true) {
      const auto next = line.find(delimiter, pos);
      fields.push_back(trim(line.substr(
          pos, next == std::string::npos ? std::string::npos : next - pos)));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }
  return fields;
}

// Parses a numeric table into rows; returns per-row source line numbers so
// errors can be reported against the file.
struct ParsedTable {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
};

ParsedTable parse_table_file(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path);
  }
  ParsedTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, delimiter);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& field : fields) {
      row.push_back(parse_number(field, path, line_no));
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected " + std::to_string(width) +
                        " fields, got " + std::to_string(row.size()));
    }
    table.rows.push_back(std::move(row));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) {
    throw FormatError(path + ": no data rows");
  }
  return table;
}

}  // namespace

LabeledDataset load_mnist(const std::string& images_path,
                          const std::string& labels_path) {
  const auto images = read_binary_file(images_path);
  const std::uint32_t image_magic = read_be32(images, 0, images_path);
  if (image_magic != 0x00000803u) {
    std::ostringstream msg;
    msg << images_path << ": bad image magic 0x" << std::hex << image_magic
        << " at byte 0";
    throw FormatError(msg.str());
  }
  const std::uint32_t count = read_be32(images, 4, images_path);
  const std::uint32_t rows = read_be32(images, 8, images_path);
  const std::uint32_t cols = read_be32(images, 12, images_path);
  const std::size_t pixels =
      static_cast<std::size_t>(count) * rows * cols;
  if (images.size() != 16 + pixels) {
    throw FormatError(images_path + ": expected " +
                      std::to_string(16 + pixels) + " bytes, got " +
                      std::to_string(images.size()) + " (data from byte 16)");
  }

  const auto labels = read_binary_file(labels_path);
  const std::uint32_t label_magic = read_be32(labels, 0, labels_path);
  if (label_magic != 0x00000801u) {
    std::ostringstream msg;
    msg << labels_path << ": bad label magic 0x" << std::hex << label_magic
        << " at byte 0";
    throw FormatError(msg.str());
  }
  const std::uint32_t label_count = read_be32(labels, 4, labels_path);
  if (labels.size() != 8 + static_cast<std::size_t>(label_count)) {
    throw FormatError(labels_path + ": expected " +
                      std::to_string(8 + label_count) + " bytes, got " +
                      std::to_string(labels.size()) + " (data from byte 8)");
  }
  if (label_count != count) {
    throw FormatError(labels_path + ": " + std::to_string(label_count) +
                      " labels for " + std::to_string(count) + " images");
  }

  LabeledDataset ds;
  ds.name = file_stem(images_path);
  ds.features = DenseMatrix(count, static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < pixels; ++i) {
    ds.features.data()[i] = static_cast<double>(images[16 + i]) / 255.0;
  }
  ds.labels.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    ds.labels[i] = labels[8 + i];
  }
  return ds;
}

LabeledDataset load_cifar(std::span<const std::string> batch_paths) {
  if (batch_paths.empty()) {
    throw ParamError("load_cifar: no batch paths");
  }
  constexpr std::size_t kRecord = 3073;  // 1 label byte + 32*32*3 pixels
  std::size_t total = 0;
  std::vector<std::vector<std::uint8_t>> batches;
  batches.reserve(batch_paths.size());
  for (const auto& path : batch_paths) {
    auto bytes = read_binary_file(path);
    if (bytes.empty() || bytes.size() % kRecord != 0) {
      throw FormatError(path + ": size " + std::to_string(bytes.size()) +
                        " is not a positive multiple of " +
                        std::to_string(kRecord) + "-byte records");
    }
    total += bytes.size() / kRecord;
    batches.push_back(std::move(bytes));
  }

  LabeledDataset ds;
  ds.name = file_stem(batch_paths.front());
  ds.features = DenseMatrix(total, kRecord - 1);
  ds.labels.resize(total);
  std::size_t row = 0;
  for (const auto& bytes : batches) {
    for (std::size_t rec = 0; rec < bytes.size(); rec += kRecord, ++row) {
      ds.labels[row] = bytes[rec];
      auto dest = ds.features.row(row);
      for (std::size_t j = 0; j < kRecord - 1; ++j) {
        dest[j] = static_cast<double>(bytes[rec + 1 + j]) / 255.0;
      }
    }
  }
  return ds;
}

LabeledDataset load_table(const std::string& features_path,
                          const std::string& labels_path, char delimiter) {
  const auto table = parse_table_file(features_path, delimiter);
  const std::size_t n = table.rows.size();
  const bool inline_labels = labels_path.empty();
  const std::size_t width = table.rows.front().size();
  if (inline_labels && width < 2) {
    throw FormatError(features_path +
                      ": need at least 2 fields per row for inline labels");
  }
  const std::size_t d = inline_labels ? width - 1 : width;

  LabeledDataset ds;
  ds.name = file_stem(features_path);
  ds.features = DenseMatrix(n, d);
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ds.features(i, j) = table.rows[i][j];
    }
    if (inline_labels) {
      ds.labels[i] = to_class_id(table.rows[i][d], features_path,
                                 table.line_numbers[i]);
    }
  }
  if (!inline_labels) {
    const auto labels = parse_table_file(labels_path, delimiter);
    if (labels.rows.size() != n) {
      throw FormatError(labels_path + ": " +
                        std::to_string(labels.rows.size()) + " labels for " +
                        std::to_string(n) + " feature rows");
    }
    if (labels.rows.front().size() != 1) {
      throw FormatError(labels_path + ": expected one label per line");
    }
    for (std::size_t i = 0; i < n; ++i) {
      ds.labels[i] =
          to_class_id(labels.rows[i][0], labels_path, labels.line_numbers[i]);
    }
  }
  return ds;
}

LabeledDataset filter_binary(const LabeledDataset& ds, int positive_class,
                             int negative_class) {
  if (positive_class == negative_class) {
    throw ParamError("filter_binary: classes must differ");
  }
  if (ds.labels.size() != ds.features.rows()) {
    throw ShapeError("filter_binary: labels/features row mismatch");
  }
  std::vector<std::size_t> keep;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    if (ds.labels[i] == positive_class || ds.labels[i] == negative_class) {
      keep.push_back(i);
      if (ds.labels[i] == positive_class) ++positives;
    }
  }
  if (positives == 0 || positives == keep.size()) {
    throw DegenerateError("filter_binary: class " +
                          std::to_string(positives == 0 ? positive_class
                                                        : negative_class) +
                          " has no instances");
  }

  LabeledDataset out;
  out.name = ds.name;
  out.features = ds.features.select_rows(keep);
  out.labels.resize(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.labels[i] = ds.labels[keep[i]] == positive_class ? 1 : -1;
  }
  out.class_map[positive_class] = 1;
  out.class_map[negative_class] = -1;
  return out;
}

TrainTestSplit split(const LabeledDataset& ds, const SplitSpec& spec) {
  const std::size_t n = ds.features.rows();
  if (ds.labels.size() != n) {
    throw ShapeError("split: labels/features row mismatch");
  }
  if (n < 4) {
    throw ParamError("split: need at least 4 rows");
  }
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw ParamError("split: test_fraction must lie in (0, 1)");
  }

  RngEngine eng(spec.seed);
  std::vector<std::size_t> test_rows;
  std::vector<std::size_t> train_rows;

  const auto take = [&](const std::vector<std::size_t>& group) {
    std::size_t want = static_cast<std::size_t>(
        spec.test_fraction * static_cast<double>(group.size()) + 0.5);
    want = std::clamp<std::size_t>(want, 1, group.size() - 1);
    const auto order = shuffled_indices(group.size(), eng);
    for (std::size_t i = 0; i < group.size(); ++i) {
      (i < want ? test_rows : train_rows).push_back(group[order[i]]);
    }
  };

  if (spec.stratified) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) {
      by_class[ds.labels[i]].push_back(i);
    }
    for (const auto& [label, group] : by_class) {
      if (group.size() < 2) {
        throw DegenerateError("split: class " + std::to_string(label) +
                              " has fewer than 2 instances");
      }
      take(group);
    }
  } else {
    std::vector<std::size_t> everything(n);
    std::iota(everything.begin(), everything.end(), std::size_t{0});
    take(everything);
  }

  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());

  const auto build = [&](const std::vector<std::size_t>& rows) {
    LabeledDataset part;
    part.name = ds.name;
    part.class_map = ds.class_map;
    part.features = ds.features.select_rows(rows);
    part.labels.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      part.labels[i] = ds.labels[rows[i]];
    }
    return part;
  };
  return TrainTestSplit{build(train_rows), build(test_rows)};
}

Scaler scaler_fit(const DenseMatrix& train) {
  const std::size_t n = train.rows();
  const std::size_t d = train.cols();
  if (n == 0 || d == 0) {
    throw ShapeError("scaler_fit: empty training matrix");
  }
  Scaler scaler;
  scaler.mean.resize(d);
  scaler.stddev.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += train(i, j);
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = train(i, j) - mean;
      sq += diff * diff;
    }
    const double stddev = std::sqrt(sq / static_cast<double>(n));
    scaler.mean[j] = mean;
    // Constant columns (allowing for accumulation noise) keep scale 1.
    scaler.stddev[j] =
        stddev <= 1e-12 * (1.0 + std::abs(mean)) ? 1.0 : stddev;
  }
  return scaler;
}

DenseMatrix scaler_apply(const Scaler& scaler, const DenseMatrix& x) {
  if (x.cols() != scaler.mean.size()) {
    throw ShapeError("scaler_apply: input has " + std::to_string(x.cols()) +
                     " columns, scaler expects " +
                     std::to_string(scaler.mean.size()));
  }
  DenseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      out(i, j) = (x(i, j) - scaler.mean[j]) / scaler.stddev[j];
    }
  }
  return out;
}

LabeledDataset synth_two_clusters(std::size_t n, std::size_t d,
                                  double separation, std::uint64_t seed) {
  if (n < 4) {
    throw ParamError("synth_two_clusters: need n >= 4");
  }
  if (d < 1) {
    throw ParamError("synth_two_clusters: need d >= 1");
  }
  if (!(separation >= 0.0)) {
    throw ParamError("synth_two_clusters: separation must be >= 0");
  }
  RngEngine eng(seed);
  LabeledDataset ds;
  ds.name = "two_clusters";
  ds.features = DenseMatrix(n, d);
  ds.labels.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i < half;
    ds.labels[i] = positive ? 1 : -1;
    for (std::size_t j = 0; j < d; ++j) {
      ds.features(i, j) = gaussian(eng);
    }
    ds.features(i, 0) += positive ? separation / 2.0 : -separation / 2.0;
  }
  ds.class_map[1] = 1;
  ds.class_map[-1] = -1;
  return ds;
}

LabeledDataset synth_circles(std::size_t n, double noise,
                             std::uint64_t seed) {
  if (n < 4) {
    throw ParamError("synth_circles: need n >= 4");
  }
  if (!(noise >= 0.0)) {
    throw ParamError("synth_circles: noise must be >= 0");
  }
  RngEngine eng(seed);
  LabeledDataset ds;
  ds.name = "circles";
  ds.features = DenseMatrix(n, 2);
  ds.labels.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const bool inner = i < half;
    ds.labels[i] = inner ? 1 : -1;
    const double radius = inner ? 1.0 : 2.0;
    const double theta = uniform_real(eng, 0.0, 2.0 * std::numbers::pi);
    ds.features(i, 0) = radius * std::cos(theta) + noise * gaussian(eng);
    ds.features(i, 1) = radius * std::sin(theta) + noise * gaussian(eng);
  }
  ds.class_map[1] = 1;
  ds.class_map[-1] = -1;
  return ds;
}

}  // namespace kpca
