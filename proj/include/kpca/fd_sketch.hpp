#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kpca/matrix.hpp"

namespace kpca {

// Frequent Directions sketch over a stream of m-dimensional rows. Holds at
// most l rows; when the buffer fills, the next insert shrinks it: after an
// SVD of the buffer, delta = sigma_{l/2}^2 is subtracted from every squared
// singular value and the buffer becomes Sigma' V^T. Rows past `filled` are
// always zero.
//
// Single-writer: inserts are sequential; basis() is safe to call
// concurrently only while no insert is active.
class FdSketch {
 public:
  // l must be even and >= 2 (the shrink step uses the l/2-th singular value).
  FdSketch(std::size_t l, std::size_t m);

  void insert(std::span<const double> row);

  // m x k orthonormal top right-singular-vectors of the buffer.
  DenseMatrix basis(std::size_t k) const;

  std::size_t capacity() const { return capacity_; }
  std::size_t width() const { return width_; }
  std::size_t filled() const { return filled_; }
  std::uint64_t rows_seen() const { return rows_seen_; }
  const DenseMatrix& buffer() const { return buffer_; }

  // Flat binary layout: l, m, filled, rows_seen as 64-bit little-endian,
  // then the l x m buffer row-major as 64-bit floats.
  std::vector<std::uint8_t> serialize() const;
  static FdSketch deserialize(std::span<const std::uint8_t> bytes);

 private:
  void shrink();

  std::size_t capacity_ = 0;  // l
  std::size_t width_ = 0;     // m
  std::size_t filled_ = 0;
  std::uint64_t rows_seen_ = 0;
  DenseMatrix buffer_;        // l x m
};

}  // namespace kpca
