#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "kpca/errors.hpp"
#include "kpca/kernel.hpp"
#include "kpca/numerics.hpp"
#include "kpca/rff.hpp"
#include "kpca/rnca.hpp"
#include "kpca/skpca.hpp"
#include "kpca/svm.hpp"
#include "oracles.hpp"

namespace {

// Wraps another stream and records how often each row index was served, to
// verify the fit consumes the stream exactly once front to back.
class CountingStream final : public kpca::RowStream {
 public:
  explicit CountingStream(const kpca::DenseMatrix& source)
      : source_(&source), serves_(source.rows(), 0) {}

  std::size_t width() const override { return source_->cols(); }

  bool next(std::span<double> row) override {
    ++next_calls_;
    if (cursor_ >= source_->rows()) return false;
    const auto src = source_->row(cursor_);
    for (std::size_t j = 0; j < src.size(); ++j) row[j] = src[j];
    ++serves_[cursor_];
    ++cursor_;
    return true;
  }

  int next_calls() const { return next_calls_; }
  const std::vector<int>& serves() const { return serves_; }

 private:
  const kpca::DenseMatrix* source_;
  std::size_t cursor_ = 0;
  int next_calls_ = 0;
  std::vector<int> serves_;
};

kpca::DenseMatrix two_blobs(std::size_t n, std::size_t d, double separation,
                            std::uint64_t seed) {
  kpca::RngEngine eng(seed);
  kpca::DenseMatrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const double offset = (i < n / 2) ? -separation / 2 : separation / 2;
    for (std::size_t j = 0; j < d; ++j) {
      out(i, j) = kpca::gaussian(eng) + (j == 0 ? offset : 0.0);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("skpca") {

TEST_CASE("a short stream reduces to PCA of the uncentered feature matrix") {
  // With n <= l the sketch never shrinks, so the basis must equal the top
  // right singular vectors of Psi exactly (up to column signs).
  const auto a = oracle::random_matrix(20, 4, 1);
  const auto spec = kpca::KernelSpec::rbf(0.5);
  const std::size_t m = 16, l = 32, k = 3;
  kpca::MatrixRowStream rows(a);
  const auto model = kpca::skpca_fit_stream(rows, spec, m, l, k, 7);
  REQUIRE(model.basis.rows() == m);
  REQUIRE(model.basis.cols() == k);
  CHECK(model.k == k);

  const auto psi = kpca::rff_transform(model.map, a);
  const auto svd = kpca::svd(psi);
  for (std::size_t c = 0; c < k; ++c) {
    double dot = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      dot += model.basis(i, c) * svd.v(i, c);
    }
    const double sign = dot < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(model.basis(i, c) ==
            doctest::Approx(sign * svd.v(i, c)).epsilon(1e-6));
    }
  }

  SUBCASE("basis columns are orthonormal") {
    const auto gram = oracle::gram_naive(model.basis);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        CHECK(gram(i, j) ==
              doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("projected clusters stay linearly separable") {
  const std::size_t n = 1000;
  const auto data = two_blobs(n, 10, 8.0, 21);
  const double gamma = kpca::default_gamma(data);
  kpca::MatrixRowStream rows(data);
  const auto model = kpca::skpca_fit_stream(
      rows, kpca::KernelSpec::rbf(gamma), 256, 64, 2, 3);
  const auto projected = kpca::skpca_transform(model, data);

  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < n / 2 ? -1 : 1;
  const auto svm = kpca::svm_train(projected, labels, 10.0);
  const auto pred = kpca::svm_predict(svm, projected);
  int correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pred[i] == labels[i]) ++correct;
  }
  CHECK(static_cast<double>(correct) / n >= 0.99);
}

TEST_CASE("deterministic for a fixed seed") {
  const auto a = oracle::random_matrix(120, 6, 31);
  const auto spec = kpca::KernelSpec::rbf(0.3);
  kpca::MatrixRowStream r1(a), r2(a);
  const auto m1 = kpca::skpca_fit_stream(r1, spec, 64, 16, 4, 11);
  const auto m2 = kpca::skpca_fit_stream(r2, spec, 64, 16, 4, 11);
  CHECK(oracle::max_abs_diff(m1.map.frequencies, m2.map.frequencies) == 0.0);
  CHECK(oracle::max_abs_diff(m1.basis, m2.basis) == 0.0);
  CHECK(oracle::max_abs_diff(m1.sketch.buffer(), m2.sketch.buffer()) == 0.0);
  CHECK(m1.sketch.rows_seen() == m2.sketch.rows_seen());
}

TEST_CASE("the fit is single-pass and bounded-memory") {
  const auto a = oracle::random_matrix(200, 5, 41);
  const auto spec = kpca::KernelSpec::rbf(0.4);
  CountingStream rows(a);
  const std::size_t l = 12;
  const auto model = kpca::skpca_fit_stream(rows, spec, 32, l, 3, 1);

  // Every row served exactly once, plus one final call that signals the end.
  CHECK(rows.next_calls() == 201);
  for (const int count : rows.serves()) {
    CHECK(count == 1);
  }
  // The retained state is the l x m sketch, independent of stream length.
  CHECK(model.sketch.buffer().rows() == l);
  CHECK(model.sketch.buffer().cols() == 32);
  CHECK(model.sketch.rows_seen() == 200);
}

TEST_CASE("skpca_transform shape and norm") {
  const auto a = oracle::random_matrix(50, 4, 51);
  const auto spec = kpca::KernelSpec::rbf(0.5);
  kpca::MatrixRowStream rows(a);
  const auto model = kpca::skpca_fit_stream(rows, spec, 48, 16, 5, 9);
  const auto x = oracle::random_matrix(12, 4, 52);
  const auto y = kpca::skpca_transform(model, x);
  REQUIRE(y.rows() == 12);
  REQUIRE(y.cols() == 5);

  SUBCASE("projection norm never exceeds the feature norm sqrt(2)") {
    for (std::size_t i = 0; i < y.rows(); ++i) {
      double norm = 0.0;
      for (std::size_t j = 0; j < y.cols(); ++j) norm += y(i, j) * y(i, j);
      CHECK(std::sqrt(norm) <= std::sqrt(2.0) + 1e-12);
    }
  }

  SUBCASE("matches uncentered PCA projection when the sketch is lossless") {
    // l >= n: basis spans the true top singular directions of Psi, so the
    // oracle is rff_transform followed by the eigenvectors of Psi^T Psi.
    const auto b = oracle::random_matrix(80, 6, 53);
    kpca::MatrixRowStream rows_b(b);
    const auto lossless =
        kpca::skpca_fit_stream(rows_b, spec, 40, 96, 4, 13);
    const auto test_rows = oracle::random_matrix(10, 6, 54);
    const auto got = kpca::skpca_transform(lossless, test_rows);

    const auto psi_train = kpca::rff_transform(lossless.map, b);
    const auto eig = kpca::sym_eig(oracle::gram_naive(psi_train));
    const auto psi_test = kpca::rff_transform(lossless.map, test_rows);
    for (std::size_t c = 0; c < 4; ++c) {
      // Align the oracle eigenvector sign with the model basis column.
      double dot = 0.0;
      for (std::size_t i = 0; i < 40; ++i) {
        dot += lossless.basis(i, c) * eig.eigenvectors(i, c);
      }
      const double sign = dot < 0.0 ? -1.0 : 1.0;
      for (std::size_t r = 0; r < 10; ++r) {
        double expected = 0.0;
        for (std::size_t i = 0; i < 40; ++i) {
          expected += psi_test(r, i) * sign * eig.eigenvectors(i, c);
        }
        CHECK(got(r, c) == doctest::Approx(expected).epsilon(1e-6));
      }
    }
  }

  SUBCASE("dimension mismatch is rejected") {
    kpca::DenseMatrix wrong(3, 7);
    CHECK_THROWS_AS((void)kpca::skpca_transform(model, wrong),
                    kpca::ShapeError);
  }
}

TEST_CASE("skpca_approx_gram structure") {
  const auto a = oracle::random_matrix(40, 5, 61);
  const auto spec = kpca::KernelSpec::rbf(0.4);
  kpca::MatrixRowStream rows(a);
  const std::size_t k = 4;
  const auto model = kpca::skpca_fit_stream(rows, spec, 64, 16, k, 17);
  const auto g = kpca::skpca_approx_gram(model, a);
  REQUIRE(g.rows() == 40);
  REQUIRE(g.cols() == 40);

  SUBCASE("symmetric and PSD") {
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = i + 1; j < g.cols(); ++j) {
        CHECK(std::abs(g(i, j) - g(j, i)) < 1e-12);
      }
    }
    const auto eig = kpca::sym_eig(g);
    for (const double lambda : eig.eigenvalues) {
      CHECK(lambda >= -1e-8);
    }
  }

  SUBCASE("rank at most k") {
    const auto s = kpca::svd(g).singular_values;
    for (std::size_t i = k; i < s.size(); ++i) {
      CHECK(s[i] < 1e-10 * s.front());
    }
  }

  SUBCASE("lossless sketch with full k reproduces the RNCA approximation") {
    // l >= n and k = n: the projection keeps the whole row space of Psi,
    // so the approximate Gram equals Psi Psi^T.
    const auto b = oracle::random_matrix(30, 4, 62);
    kpca::MatrixRowStream rows_b(b);
    const auto lossless =
        kpca::skpca_fit_stream(rows_b, spec, 64, 64, 30, 19);
    const auto got = kpca::skpca_approx_gram(lossless, b);
    const auto expected = kpca::rnca_approx_gram(lossless.map, b);
    CHECK(oracle::max_abs_diff(got, expected) < 1e-6);
  }
}

TEST_CASE("spectral error is non-increasing in the sketch size") {
  // Ten-seed mean of |K - K_tilde|_2 over l in {16, 64, 256} at n = 300,
  // m = 1024.
  const std::size_t n = 300;
  const auto a = oracle::random_matrix(n, 6, 71);
  const double gamma = kpca::default_gamma(a);
  const auto spec = kpca::KernelSpec::rbf(gamma);
  const auto k_exact = kpca::gram_matrix(spec, a);

  const std::vector<std::size_t> ls{16, 64, 256};
  std::vector<double> mean_err;
  for (const std::size_t l : ls) {
    double total = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      kpca::MatrixRowStream rows(a);
      const auto model = kpca::skpca_fit_stream(rows, spec, 1024, l, 8, s);
      const auto approx = kpca::skpca_approx_gram(model, a);
      kpca::DenseMatrix diff(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          diff(i, j) = k_exact(i, j) - approx(i, j);
        }
      }
      total += kpca::spectral_norm(diff);
    }
    mean_err.push_back(total / 10.0);
  }
  CHECK(mean_err[1] <= mean_err[0]);
  CHECK(mean_err[2] <= mean_err[1]);
}

TEST_CASE("projections converge to exact KPCA up to rotation") {
  // l >= n and large m: the mean largest principal angle between the SKPCA
  // projection span and the exact KPCA projection span stays below 0.3 rad
  // (n = 200, m = 4096, 10 seeds).
  const std::size_t n = 200;
  const std::size_t k = 4;
  const auto a = oracle::random_matrix(n, 5, 91);
  const double gamma = kpca::default_gamma(a);
  const auto spec = kpca::KernelSpec::rbf(gamma);

  const auto exact = kpca::exact_kpca_fit(a, spec, k);
  const auto y_exact = kpca::exact_kpca_project(exact, a);
  const auto u_exact = kpca::svd(y_exact).u;  // orthonormal span, 200 x 4

  double total_angle = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    kpca::MatrixRowStream rows(a);
    const auto model = kpca::skpca_fit_stream(rows, spec, 4096, 256, k, s);
    const auto y = kpca::skpca_transform(model, a);
    total_angle += oracle::subspace_angle(kpca::svd(y).u, u_exact);
  }
  CHECK(total_angle / 10.0 < 0.3);
}

TEST_CASE("parameter and stream validation") {
  const auto a = oracle::random_matrix(10, 3, 81);
  const auto spec = kpca::KernelSpec::rbf(0.5);

  SUBCASE("k must be positive") {
    kpca::MatrixRowStream rows(a);
    CHECK_THROWS_AS((void)kpca::skpca_fit_stream(rows, spec, 16, 8, 0, 0),
                    kpca::ParamError);
  }

  SUBCASE("odd sketch size is rejected") {
    kpca::MatrixRowStream rows(a);
    CHECK_THROWS_AS((void)kpca::skpca_fit_stream(rows, spec, 16, 7, 2, 0),
                    kpca::ParamError);
  }

  SUBCASE("a stream shorter than k is a rank error") {
    kpca::DenseMatrix tiny(2, 3);
    tiny(0, 0) = 1.0;
    tiny(1, 1) = 1.0;
    kpca::MatrixRowStream rows(tiny);
    try {
      (void)kpca::skpca_fit_stream(rows, spec, 16, 8, 5, 0);
      FAIL("expected RankError");
    } catch (const kpca::RankError& e) {
      CHECK(e.achievable == 2);
    }
  }
}

}  // TEST_SUITE
