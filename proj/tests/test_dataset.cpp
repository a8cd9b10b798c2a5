#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "kpca/dataset.hpp"
#include "kpca/errors.hpp"
#include "kpca/kernel.hpp"
#include "kpca/svm.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;

// Per-run fixture directory; removed by the last TEST_CASE via cleanup().
class TempDir {
 public:
  TempDir() {
    root_ = fs::temp_directory_path() /
            ("kpca_dataset_fixtures_" + std::to_string(::getpid()));
    fs::create_directories(root_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  std::string path(const std::string& name) const {
    return (root_ / name).string();
  }

 private:
  fs::path root_;
};

void write_bytes(const std::string& path,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

void push_be32(std::vector<std::uint8_t>& bytes, std::uint32_t value) {
  bytes.push_back(static_cast<std::uint8_t>(value >> 24));
  bytes.push_back(static_cast<std::uint8_t>(value >> 16));
  bytes.push_back(static_cast<std::uint8_t>(value >> 8));
  bytes.push_back(static_cast<std::uint8_t>(value));
}

// Two 2x2 images with pixel values covering the scaling range.
std::vector<std::uint8_t> idx_images() {
  std::vector<std::uint8_t> bytes;
  push_be32(bytes, 0x00000803);
  push_be32(bytes, 2);  // count
  push_be32(bytes, 2);  // rows
  push_be32(bytes, 2);  // cols
  for (const std::uint8_t px : {0, 128, 255, 64, 10, 20, 30, 40}) {
    bytes.push_back(px);
  }
  return bytes;
}

std::vector<std::uint8_t> idx_labels(std::vector<std::uint8_t> labels) {
  std::vector<std::uint8_t> bytes;
  push_be32(bytes, 0x00000801);
  push_be32(bytes, static_cast<std::uint32_t>(labels.size()));
  bytes.insert(bytes.end(), labels.begin(), labels.end());
  return bytes;
}

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("load_mnist round-trips an IDX fixture") {
  TempDir dir;
  write_bytes(dir.path("images"), idx_images());
  write_bytes(dir.path("labels"), idx_labels({7, 1}));

  const auto ds = kpca::load_mnist(dir.path("images"), dir.path("labels"));
  REQUIRE(ds.features.rows() == 2);
  REQUIRE(ds.features.cols() == 4);
  REQUIRE(ds.labels.size() == 2);
  CHECK(ds.labels[0] == 7);
  CHECK(ds.labels[1] == 1);
  CHECK(ds.features(0, 0) == 0.0);
  CHECK(ds.features(0, 1) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
  CHECK(ds.features(0, 2) == 1.0);
  CHECK(ds.features(0, 3) == doctest::Approx(64.0 / 255.0).epsilon(1e-12));
  CHECK(ds.features(1, 0) == doctest::Approx(10.0 / 255.0).epsilon(1e-12));

  SUBCASE("loading twice gives identical data") {
    const auto again =
        kpca::load_mnist(dir.path("images"), dir.path("labels"));
    CHECK(oracle::max_abs_diff(ds.features, again.features) == 0.0);
    CHECK(ds.labels == again.labels);
  }

  SUBCASE("bad image magic is a format error naming byte 0") {
    auto bad = idx_images();
    bad[3] = 0x99;
    write_bytes(dir.path("bad_images"), bad);
    try {
      (void)kpca::load_mnist(dir.path("bad_images"), dir.path("labels"));
      FAIL("expected FormatError");
    } catch (const kpca::FormatError& e) {
      CHECK(std::string(e.what()).find("magic") != std::string::npos);
    }
  }

  SUBCASE("truncated pixel payload is a format error") {
    auto cut = idx_images();
    cut.pop_back();
    write_bytes(dir.path("cut_images"), cut);
    CHECK_THROWS_AS(
        (void)kpca::load_mnist(dir.path("cut_images"), dir.path("labels")),
        kpca::FormatError);
  }

  SUBCASE("image/label count mismatch is a format error") {
    write_bytes(dir.path("three_labels"), idx_labels({7, 1, 4}));
    CHECK_THROWS_AS(
        (void)kpca::load_mnist(dir.path("images"), dir.path("three_labels")),
        kpca::FormatError);
  }

  SUBCASE("missing file is a format error") {
    CHECK_THROWS_AS(
        (void)kpca::load_mnist(dir.path("nope"), dir.path("labels")),
        kpca::FormatError);
  }
}

TEST_CASE("load_cifar round-trips a binary batch fixture") {
  TempDir dir;
  std::vector<std::uint8_t> batch;
  for (int rec = 0; rec < 2; ++rec) {
    batch.push_back(static_cast<std::uint8_t>(rec == 0 ? 3 : 8));  // label
    for (int i = 0; i < 3072; ++i) {
      batch.push_back(static_cast<std::uint8_t>((rec * 7 + i) % 256));
    }
  }
  write_bytes(dir.path("batch.bin"), batch);

  const std::vector<std::string> paths{dir.path("batch.bin")};
  const auto ds = kpca::load_cifar(paths);
  REQUIRE(ds.features.rows() == 2);
  REQUIRE(ds.features.cols() == 3072);
  CHECK(ds.labels == std::vector<int>{3, 8});
  CHECK(ds.features(0, 0) == 0.0);
  CHECK(ds.features(0, 255) == 1.0);
  CHECK(ds.features(1, 0) == doctest::Approx(7.0 / 255.0).epsilon(1e-12));

  SUBCASE("two batches concatenate in order") {
    std::vector<std::uint8_t> second(batch.begin(),
                                     batch.begin() + 3073);
    second[0] = 5;
    write_bytes(dir.path("batch2.bin"), second);
    const std::vector<std::string> both{dir.path("batch.bin"),
                                        dir.path("batch2.bin")};
    const auto merged = kpca::load_cifar(both);
    CHECK(merged.features.rows() == 3);
    CHECK(merged.labels == std::vector<int>{3, 8, 5});
  }

  SUBCASE("misaligned batch size is a format error") {
    std::vector<std::uint8_t> ragged(batch.begin(), batch.end() - 1);
    write_bytes(dir.path("ragged.bin"), ragged);
    const std::vector<std::string> bad{dir.path("ragged.bin")};
    CHECK_THROWS_AS((void)kpca::load_cifar(bad), kpca::FormatError);
  }

  SUBCASE("empty path list is a parameter error") {
    const std::vector<std::string> none;
    CHECK_THROWS_AS((void)kpca::load_cifar(none), kpca::ParamError);
  }
}

TEST_CASE("load_table parses delimited text") {
  TempDir dir;

  SUBCASE("comma-delimited with inline trailing labels") {
    write_text(dir.path("table.csv"),
               "1.0,2.5,1\n-0.5,3.25,2\n0.0,-1.0,1\n");
    const auto ds = kpca::load_table(dir.path("table.csv"), "", ',');
    REQUIRE(ds.features.rows() == 3);
    REQUIRE(ds.features.cols() == 2);
    CHECK(ds.features(0, 0) == 1.0);
    CHECK(ds.features(1, 1) == 3.25);
    CHECK(ds.labels == std::vector<int>{1, 2, 1});
  }

  SUBCASE("whitespace-delimited with separate label file") {
    write_text(dir.path("x.txt"), "  1.0   2.0\n3.0\t4.0\n");
    write_text(dir.path("y.txt"), "1\n2\n");
    const auto ds = kpca::load_table(dir.path("x.txt"), dir.path("y.txt"),
                                     ' ');
    REQUIRE(ds.features.rows() == 2);
    REQUIRE(ds.features.cols() == 2);
    CHECK(ds.features(1, 0) == 3.0);
    CHECK(ds.labels == std::vector<int>{1, 2});
  }

  SUBCASE("ragged row reports its line number") {
    write_text(dir.path("ragged.csv"), "1,2,1\n3,4\n5,6,2\n");
    try {
      (void)kpca::load_table(dir.path("ragged.csv"), "", ',');
      FAIL("expected FormatError");
    } catch (const kpca::FormatError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }

  SUBCASE("non-numeric field reports its line number") {
    write_text(dir.path("alpha.csv"), "1,2,1\n3,oops,2\n");
    try {
      (void)kpca::load_table(dir.path("alpha.csv"), "", ',');
      FAIL("expected FormatError");
    } catch (const kpca::FormatError& e) {
      CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
  }

  SUBCASE("non-integral label is a format error") {
    write_text(dir.path("frac.csv"), "1,2,1.5\n");
    CHECK_THROWS_AS((void)kpca::load_table(dir.path("frac.csv"), "", ','),
                    kpca::FormatError);
  }

  SUBCASE("label count mismatch is a format error") {
    write_text(dir.path("x2.txt"), "1 2\n3 4\n");
    write_text(dir.path("y2.txt"), "1\n");
    CHECK_THROWS_AS(
        (void)kpca::load_table(dir.path("x2.txt"), dir.path("y2.txt"), ' '),
        kpca::FormatError);
  }
}

TEST_CASE("filter_binary keeps and maps two classes") {
  kpca::LabeledDataset ds;
  ds.features = oracle::random_matrix(6, 2, 3);
  ds.labels = {2, 5, 2, 7, 5, 2};
  ds.name = "toy";

  const auto filtered = kpca::filter_binary(ds, 5, 2);
  REQUIRE(filtered.features.rows() == 5);  // class 7 dropped
  CHECK(filtered.labels == std::vector<int>{-1, 1, -1, 1, -1});
  CHECK(filtered.class_map.at(5) == 1);
  CHECK(filtered.class_map.at(2) == -1);
  // Feature rows follow the source order of the kept classes.
  CHECK(filtered.features(0, 0) == ds.features(0, 0));
  CHECK(filtered.features(3, 0) == ds.features(4, 0));

  SUBCASE("missing class is degenerate") {
    CHECK_THROWS_AS((void)kpca::filter_binary(ds, 5, 9),
                    kpca::DegenerateError);
  }
  SUBCASE("equal classes are a parameter error") {
    CHECK_THROWS_AS((void)kpca::filter_binary(ds, 5, 5), kpca::ParamError);
  }
}

TEST_CASE("split carves a deterministic, exhaustive partition") {
  kpca::LabeledDataset ds;
  ds.features = kpca::DenseMatrix(100, 1);
  ds.labels.resize(100);
  for (std::size_t i = 0; i < 100; ++i) {
    ds.features(i, 0) = static_cast<double>(i);  // unique row marker
    ds.labels[i] = i < 60 ? 1 : -1;              // 60/40 mix
  }

  const kpca::SplitSpec spec{0.25, 11, true};
  const auto parts = kpca::split(ds, spec);
  CHECK(parts.train.features.rows() == 75);
  CHECK(parts.test.features.rows() == 25);

  SUBCASE("disjoint and exhaustive by row identity") {
    std::set<int> seen;
    for (std::size_t i = 0; i < parts.train.features.rows(); ++i) {
      seen.insert(static_cast<int>(parts.train.features(i, 0)));
    }
    for (std::size_t i = 0; i < parts.test.features.rows(); ++i) {
      seen.insert(static_cast<int>(parts.test.features(i, 0)));
    }
    CHECK(seen.size() == 100);
  }

  SUBCASE("stratified shares stay within one instance per class") {
    std::size_t test_pos = 0, test_neg = 0;
    for (const int label : parts.test.labels) {
      (label == 1 ? test_pos : test_neg) += 1;
    }
    // 25% of 60 positives = 15, of 40 negatives = 10.
    CHECK(std::llabs(static_cast<long long>(test_pos) - 15) <= 1);
    CHECK(std::llabs(static_cast<long long>(test_neg) - 10) <= 1);
  }

  SUBCASE("row order inside each side follows the source") {
    for (std::size_t i = 1; i < parts.train.features.rows(); ++i) {
      CHECK(parts.train.features(i, 0) > parts.train.features(i - 1, 0));
    }
    for (std::size_t i = 1; i < parts.test.features.rows(); ++i) {
      CHECK(parts.test.features(i, 0) > parts.test.features(i - 1, 0));
    }
  }

  SUBCASE("same seed reproduces the split; another seed moves it") {
    const auto again = kpca::split(ds, spec);
    CHECK(oracle::max_abs_diff(parts.test.features, again.test.features) ==
          0.0);
    const auto moved = kpca::split(ds, {0.25, 12, true});
    CHECK(oracle::max_abs_diff(parts.test.features, moved.test.features) >
          0.0);
  }

  SUBCASE("both classes appear on both sides") {
    for (const auto* side : {&parts.train, &parts.test}) {
      bool pos = false, neg = false;
      for (const int label : side->labels) {
        (label == 1 ? pos : neg) = true;
      }
      CHECK(pos);
      CHECK(neg);
    }
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS((void)kpca::split(ds, {0.0, 0, true}),
                    kpca::ParamError);
    CHECK_THROWS_AS((void)kpca::split(ds, {1.0, 0, true}),
                    kpca::ParamError);
    kpca::LabeledDataset tiny;
    tiny.features = kpca::DenseMatrix(3, 1);
    tiny.labels = {1, -1, 1};
    CHECK_THROWS_AS((void)kpca::split(tiny, spec), kpca::ParamError);
  }

  SUBCASE("a single-member class cannot be stratified") {
    kpca::LabeledDataset lopsided;
    lopsided.features = kpca::DenseMatrix(5, 1);
    lopsided.labels = {1, -1, -1, -1, -1};
    CHECK_THROWS_AS((void)kpca::split(lopsided, spec),
                    kpca::DegenerateError);
  }
}

TEST_CASE("scaler standardizes train columns") {
  kpca::DenseMatrix train(4, 2);
  // Column 0: {1, 3, 5, 7}: mean 4, population stddev sqrt(5).
  // Column 1: constant 2.0.
  for (std::size_t i = 0; i < 4; ++i) {
    train(i, 0) = 1.0 + 2.0 * static_cast<double>(i);
    train(i, 1) = 2.0;
  }
  const auto scaler = kpca::scaler_fit(train);
  REQUIRE(scaler.mean.size() == 2);
  CHECK(scaler.mean[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(scaler.stddev[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(scaler.mean[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(scaler.stddev[1] == 1.0);  // constant column keeps scale 1

  const auto scaled = kpca::scaler_apply(scaler, train);
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) mean += scaled(i, 0);
  mean /= 4.0;
  for (std::size_t i = 0; i < 4; ++i) {
    var += (scaled(i, 0) - mean) * (scaled(i, 0) - mean);
  }
  var /= 4.0;
  CHECK(std::abs(mean) < 1e-12);
  CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(scaled(i, 1) == 0.0);  // centered, unscaled
  }

  SUBCASE("dimension mismatch is rejected") {
    kpca::DenseMatrix wrong(2, 3);
    CHECK_THROWS_AS((void)kpca::scaler_apply(scaler, wrong),
                    kpca::ShapeError);
  }
}

TEST_CASE("synth_two_clusters is separable and deterministic") {
  const auto ds = kpca::synth_two_clusters(200, 4, 10.0, 5);
  REQUIRE(ds.features.rows() == 200);
  REQUIRE(ds.features.cols() == 4);
  std::size_t pos = 0;
  for (const int label : ds.labels) {
    if (label == 1) ++pos;
  }
  CHECK(pos == 100);

  SUBCASE("deterministic per seed") {
    const auto again = kpca::synth_two_clusters(200, 4, 10.0, 5);
    CHECK(oracle::max_abs_diff(ds.features, again.features) == 0.0);
  }

  SUBCASE("a linear SVM separates the raw coordinates perfectly") {
    const auto model = kpca::svm_train(ds.features, ds.labels, 10.0);
    CHECK(kpca::svm_predict(model, ds.features) == ds.labels);
  }
}

TEST_CASE("synth_circles defeats a linear classifier but not kernel PCA") {
  const auto ds = kpca::synth_circles(300, 0.1, 9);
  REQUIRE(ds.features.rows() == 300);
  REQUIRE(ds.features.cols() == 2);

  SUBCASE("radii concentrate near 1 and 2") {
    for (std::size_t i = 0; i < ds.features.rows(); ++i) {
      const double r = std::hypot(ds.features(i, 0), ds.features(i, 1));
      if (ds.labels[i] == 1) {
        CHECK(r == doctest::Approx(1.0).epsilon(0.6));
      } else {
        CHECK(r == doctest::Approx(2.0).epsilon(0.4));
      }
    }
  }

  SUBCASE("linear SVM on raw coordinates stays below 70%") {
    const auto model = kpca::svm_train(ds.features, ds.labels, 10.0);
    const auto pred = kpca::svm_predict(model, ds.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == ds.labels[i]) ++hits;
    }
    CHECK(static_cast<double>(hits) / 300.0 < 0.7);
  }

  SUBCASE("two exact kernel components make it linearly separable") {
    const auto parts = kpca::split(ds, {0.25, 3, true});
    const double gamma = kpca::default_gamma(parts.train.features);
    const auto model = kpca::exact_kpca_fit(parts.train.features,
                                            kpca::KernelSpec::rbf(gamma), 2);
    const auto train_feats =
        kpca::exact_kpca_project(model, parts.train.features);
    const auto test_feats =
        kpca::exact_kpca_project(model, parts.test.features);
    const auto svm = kpca::svm_train(train_feats, parts.train.labels, 10.0);
    const auto pred = kpca::svm_predict(svm, test_feats);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == parts.test.labels[i]) ++hits;
    }
    CHECK(static_cast<double>(hits) / pred.size() > 0.95);
  }
}

}  // TEST_SUITE
