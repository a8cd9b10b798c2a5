#include "kpca/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kpca/errors.hpp"
#include "kpca/kernel.hpp"
#include "kpca/matrix.hpp"
#include "kpca/numerics.hpp"
#include "kpca/nystrom.hpp"
#include "kpca/rff.hpp"
#include "kpca/rnca.hpp"
#include "kpca/rng.hpp"
#include "kpca/skpca.hpp"

namespace kpca {

namespace {

constexpr std::size_t kSyntheticDim = 10;
constexpr std::size_t kMaxVerificationN = 500;

// Salt keeps the data stream disjoint from the method's own draws, which
// reuse the bare seed (same engine, same transforms).
constexpr std::uint64_t kDataSeedSalt = 0x9e3779b97f4a7c15ull;

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.data()[i] = a.data()[i] - b.data()[i];
  }
  return out;
}

void require_common(std::size_t n, double gamma,
                    std::span<const std::uint64_t> seeds) {
  if (n < 2 || n > kMaxVerificationN) {
    throw ParamError("bound check: n = " + std::to_string(n) +
                     " outside verification range [2, " +
                     std::to_string(kMaxVerificationN) + "]");
  }
  if (!(gamma > 0.0)) {
    throw ParamError("bound check: gamma must be positive");
  }
  if (seeds.empty()) {
    throw ParamError("bound check: need at least one seed");
  }
}

BoundTrial make_trial(std::string label, std::size_t n, std::size_t param,
                      std::uint64_t seed, double lhs, double rhs) {
  return BoundTrial{std::move(label), n, param, seed, lhs, rhs, lhs <= rhs};
}

}  // namespace

DenseMatrix bound_synthetic_rows(std::size_t n, std::uint64_t seed) {
  RngEngine eng(seed ^ kDataSeedSalt);
  DenseMatrix data(n, kSyntheticDim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kSyntheticDim; ++j) {
      data(i, j) = gaussian(eng);
    }
  }
  return data;
}

bool BoundReport::all_satisfied() const {
  return std::all_of(trials.begin(), trials.end(),
                     [](const BoundTrial& t) { return t.satisfied; });
}

double BoundReport::pass_rate() const {
  if (trials.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& t : trials) {
    if (t.satisfied) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials.size());
}

BoundReport check_nystrom_bounds(std::size_t n, std::size_t m, std::size_t k,
                                 double gamma,
                                 std::span<const std::uint64_t> seeds) {
  require_common(n, gamma, seeds);
  if (m < 1 || m > n) {
    throw ParamError("check_nystrom_bounds: m must lie in [1, n]");
  }
  if (k < 1 || k > m || k >= n) {
    throw ParamError(
        "check_nystrom_bounds: need 1 <= k <= m and k < n (Eq. 2 divides "
        "by n - k)");
  }
  const auto spec = KernelSpec::rbf(gamma);
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double kd = static_cast<double>(k);
  const double inside = 1.0 + (nd * nd * kd - md * md * md) /
                                  (md * md * (nd - kd));
  const double frob_factor = std::sqrt(std::max(inside, 0.0));
  const double spec_factor = nd / md;

  BoundReport report;
  report.method = Method::nystrom;
  for (std::uint64_t seed : seeds) {
    const auto data = bound_synthetic_rows(n, seed);
    const auto gram = gram_matrix(spec, data);
    const auto model = nystrom_fit(data, spec, m, seed);
    const auto approx = nystrom_approx_gram(model, data);
    const auto diff = subtract(gram, approx);
    const auto diff_k = subtract(gram, best_rank_k(gram, k));

    // At m = n the approximation is exact and Eq. 2's factor is exactly
    // zero; snap eigensolver roundoff to zero so 1e-27 <= 0 cannot spoil
    // an exactly-tight bound.
    const double floor = 1e-10 * frobenius_norm(gram);
    const auto denoise = [floor](double err) {
      return err < floor ? 0.0 : err;
    };

    const double frob_err = denoise(frobenius_norm(diff));
    const double frob_best = frobenius_norm(diff_k);
    report.trials.push_back(make_trial("eq2_frobenius", n, m, seed,
                                       frob_err * frob_err,
                                       frob_factor * frob_best * frob_best));

    const double spec_err = denoise(spectral_norm(diff));
    const double spec_best = spectral_norm(diff_k);
    report.trials.push_back(make_trial("eq3_spectral", n, m, seed,
                                       spec_err * spec_err,
                                       spec_factor * spec_best * spec_best));
  }
  return report;
}

BoundReport check_rnca_bound(std::size_t n, std::size_t m, double gamma,
                             std::span<const std::uint64_t> seeds) {
  require_common(n, gamma, seeds);
  if (m < 1) {
    throw ParamError("check_rnca_bound: m must be >= 1");
  }
  const auto spec = KernelSpec::rbf(gamma);
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double rhs = 2.0 * nd * std::log(nd) / md +
                     std::sqrt(3.0 * nd * nd * std::log(nd) / md);

  BoundReport report;
  report.method = Method::rnca;
  double lhs_sum = 0.0;
  for (std::uint64_t seed : seeds) {
    const auto data = bound_synthetic_rows(n, seed);
    const auto gram = gram_matrix(spec, data);
    const auto map = rff_sample(kSyntheticDim, m, gamma, seed);
    const auto approx = rnca_approx_gram(map, data);
    const double lhs = spectral_norm(subtract(gram, approx));
    lhs_sum += lhs;
    report.trials.push_back(make_trial("eq5_sample", n, m, seed, lhs, rhs));
  }
  const double mean_lhs = lhs_sum / static_cast<double>(seeds.size());
  report.trials.push_back(make_trial("eq5_mean", n, m, 0, mean_lhs, rhs));
  return report;
}

BoundReport check_skpca_trends(std::size_t n, std::size_t m,
                               std::span<const std::size_t> l_grid,
                               std::size_t k, double gamma,
                               std::span<const std::uint64_t> seeds) {
  require_common(n, gamma, seeds);
  if (l_grid.empty()) {
    throw ParamError("check_skpca_trends: empty l grid");
  }
  for (std::size_t i = 1; i < l_grid.size(); ++i) {
    if (l_grid[i] <= l_grid[i - 1]) {
      throw ParamError("check_skpca_trends: l grid must increase strictly");
    }
  }
  if (k < 1 || k > l_grid.front() / 2) {
    throw ParamError("check_skpca_trends: need 1 <= k <= smallest l / 2");
  }
  const auto spec = KernelSpec::rbf(gamma);

  BoundReport report;
  report.method = Method::skpca;
  double prev_spec_mean = 0.0;
  double prev_frob_mean = 0.0;
  for (std::size_t li = 0; li < l_grid.size(); ++li) {
    const std::size_t l = l_grid[li];
    double spec_sum = 0.0;
    double frob_sum = 0.0;
    for (std::uint64_t seed : seeds) {
      const auto data = bound_synthetic_rows(n, seed);
      const auto gram = gram_matrix(spec, data);
      MatrixRowStream stream(data);
      const auto model = skpca_fit_stream(stream, spec, m, l, k, seed);
      const auto approx = skpca_approx_gram(model, data);
      const auto diff = subtract(gram, approx);

      spec_sum += spectral_norm(diff) / static_cast<double>(n);
      const double excess =
          frobenius_norm(diff) -
          frobenius_norm(subtract(gram, best_rank_k(gram, k)));
      frob_sum += excess;
      report.trials.push_back(
          make_trial("eq7_optimality", n, l, seed, -excess, 1e-8));
    }
    const double spec_mean = spec_sum / static_cast<double>(seeds.size());
    const double frob_mean = frob_sum / static_cast<double>(seeds.size());
    // First grid point has no predecessor: compare against itself.
    report.trials.push_back(make_trial("eq6_mean_step", n, l, 0, spec_mean,
                                       li == 0 ? spec_mean : prev_spec_mean));
    report.trials.push_back(make_trial("eq7_mean_step", n, l, 0, frob_mean,
                                       li == 0 ? frob_mean : prev_frob_mean));
    prev_spec_mean = spec_mean;
    prev_frob_mean = frob_mean;
  }
  return report;
}

}  // namespace kpca
