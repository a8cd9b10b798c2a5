#pragma once

#include <cstdint>
#include <span>

#include "kpca/fd_sketch.hpp"
#include "kpca/kernel.hpp"
#include "kpca/matrix.hpp"
#include "kpca/rff.hpp"

namespace kpca {

// Sequential source of fixed-width rows, consumed once and in order. The
// streaming fit calls next() until it returns false and never revisits a
// row.
class RowStream {
 public:
  virtual ~RowStream() = default;
  virtual std::size_t width() const = 0;
  // Fills `row` (length width()) with the next row; false at end of stream.
  virtual bool next(std::span<double> row) = 0;
};

// In-memory adapter. Holds a pointer: the matrix must outlive the stream.
class MatrixRowStream final : public RowStream {
 public:
  explicit MatrixRowStream(const DenseMatrix& source) : source_(&source) {}
  std::size_t width() const override { return source_->cols(); }
  bool next(std::span<double> row) override;

 private:
  const DenseMatrix* source_;
  std::size_t cursor_ = 0;
};

// Streaming KPCA: each input row is lifted to an m-dimensional random
// Fourier feature vector and folded into a Frequent Directions sketch; the
// principal vectors are the sketch buffer's top right singular vectors.
struct SkpcaModel {
  RffMap map;
  FdSketch sketch;    // final state after the pass
  DenseMatrix basis;  // m x k, orthonormal columns
  std::size_t k = 0;
};

// Single pass over `rows`; peak auxiliary memory is O(dm + lm), independent
// of the stream length. k <= l/2 is the useful regime: a shrink zeroes at
// least the bottom half of the sketch spectrum.
SkpcaModel skpca_fit_stream(RowStream& rows, const KernelSpec& spec,
                            std::size_t m, std::size_t l, std::size_t k,
                            std::uint64_t seed);

// psi(x) * basis, one k-vector per input row.
DenseMatrix skpca_transform(const SkpcaModel& model, const DenseMatrix& x);

// (Psi basis)(Psi basis)^T, the Gram of sketch-projected features;
// verification only.
DenseMatrix skpca_approx_gram(const SkpcaModel& model, const DenseMatrix& a);

}  // namespace kpca
