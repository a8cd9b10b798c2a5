#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "kpca/errors.hpp"

namespace kpca {

// All randomness in the library flows through mt19937_64 plus the explicit
// transforms below, so a given seed reproduces the same stream on any
// conforming standard library. std::*_distribution is avoided on purpose:
// its output is implementation-defined.
using RngEngine = std::mt19937_64;

// Uniform double in [0, 1), 53-bit resolution.
inline double uniform_unit(RngEngine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1]; safe as a log() argument.
inline double uniform_open0(RngEngine& eng) {
  return (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform_real(RngEngine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(eng);
}

// Standard normal via Box-Muller; consumes two engine draws per value.
inline double gaussian(RngEngine& eng) {
  const double u1 = uniform_open0(eng);
  const double u2 = uniform_unit(eng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Uniform integer in [0, n) without modulo bias.
inline std::size_t uniform_index(RngEngine& eng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = eng();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

// Fisher-Yates permutation of 0..n-1.
inline std::vector<std::size_t> shuffled_indices(std::size_t n,
                                                 RngEngine& eng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[uniform_index(eng, i)]);
  }
  return idx;
}

// m distinct indices from [0, n), uniform without replacement.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                           std::size_t m,
                                                           RngEngine& eng) {
  if (m > n) {
    throw ParamError("sample_without_replacement: m > n");
  }
  // Partial Fisher-Yates: the first m slots of a growing swap pass.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(idx[i], idx[i + uniform_index(eng, n - i)]);
  }
  idx.resize(m);
  return idx;
}

}  // namespace kpca
