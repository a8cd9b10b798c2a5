#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kpca/matrix.hpp"
#include "kpca/method.hpp"

namespace kpca {

// The Gaussian verification data every bound check draws per seed (n rows,
// 10 columns). Exposed so external checks can recompute any trial from
// scratch.
DenseMatrix bound_synthetic_rows(std::size_t n, std::uint64_t seed);

// One lhs <= rhs comparison. `param` is m for Nystrom/RNCA trials and l for
// SKPCA trials; aggregate rows (label *_mean*) carry seed 0.
struct BoundTrial {
  std::string label;
  std::size_t n = 0;
  std::size_t param = 0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;  // always exactly lhs <= rhs
};

struct BoundReport {
  Method method = Method::nystrom;
  std::vector<BoundTrial> trials;

  bool all_satisfied() const;
  double pass_rate() const;  // fraction of satisfied trials
};

// Per-seed checks of the Nystrom Frobenius bound
//   |K - K~|_F^2 <= sqrt(1 + (n^2 k - m^3) / (m^2 (n - k))) |K - K_k|_F^2
// (rows "eq2_frobenius") and the spectral bound
//   |K - K~|_2^2 <= (n/m) |K - K_k|_2^2
// (rows "eq3_spectral") on synthetic Gaussian data. Verification-scale n
// only (<= 500); requires 1 <= k <= m <= n and k < n.
BoundReport check_nystrom_bounds(std::size_t n, std::size_t m, std::size_t k,
                                 double gamma,
                                 std::span<const std::uint64_t> seeds);

// Per-seed spectral errors |K - Psi Psi^T|_2 (rows "eq5_sample") and their
// mean (row "eq5_mean") against 2 n ln(n) / m + sqrt(3 n^2 ln(n) / m); the
// expectation bound makes the mean row the authoritative comparison.
BoundReport check_rnca_bound(std::size_t n, std::size_t m, double gamma,
                             std::span<const std::uint64_t> seeds);

// Trend checks for the SKPCA bounds: mean |K - K~|_2 / n (rows
// "eq6_mean_step") and mean (|K - K~|_F - |K - K_k|_F) (rows
// "eq7_mean_step") must be non-increasing along the ascending l grid; each
// row compares the mean at one l against the mean at the previous l. Rows
// "eq7_optimality" additionally check per trial that the Frobenius excess
// is >= -1e-8 (K_k is the Frobenius-optimal rank-k matrix).
BoundReport check_skpca_trends(std::size_t n, std::size_t m,
                               std::span<const std::size_t> l_grid,
                               std::size_t k, double gamma,
                               std::span<const std::uint64_t> seeds);

}  // namespace kpca
