#include "kpca/fd_sketch.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "kpca/errors.hpp"
#include "kpca/numerics.hpp"

namespace kpca {

namespace {

void append_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

std::uint64_t read_u64_le(std::span<const std::uint8_t> bytes,
                          std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
  }
  return v;
}

}  // namespace

FdSketch::FdSketch(std::size_t l, std::size_t m) {
  if (l < 2 || l % 2 != 0) {
    throw ParamError("FdSketch: sketch size l = " + std::to_string(l) +
                     " must be even and >= 2");
  }
  if (m < 1) {
    throw ParamError("FdSketch: row width must be >= 1");
  }
  capacity_ = l;
  width_ = m;
  buffer_ = DenseMatrix(l, m);
}

void FdSketch::insert(std::span<const double> row) {
  if (row.size() != width_) {
    throw ShapeError("FdSketch::insert: row length " +
                     std::to_string(row.size()) + ", sketch width " +
                     std::to_string(width_));
  }
  for (double x : row) {
    if (!std::isfinite(x)) {
      throw ParamError("FdSketch::insert: non-finite row entry");
    }
  }
  if (filled_ == capacity_) {
    shrink();
  }
  std::copy(row.begin(), row.end(), buffer_.row(filled_).begin());
  ++filled_;
  ++rows_seen_;
}

void FdSketch::shrink() {
  const auto dec = svd(buffer_);
  const auto& s = dec.singular_values;
  const std::size_t half = capacity_ / 2;
  // s has min(l, m) entries; a missing sigma_{l/2} is zero.
  const double delta = half <= s.size() ? s[half - 1] * s[half - 1] : 0.0;

  buffer_ = DenseMatrix(capacity_, width_);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double shrunk = std::sqrt(std::max(s[i] * s[i] - delta, 0.0));
    if (shrunk > 0.0) {
      for (std::size_t j = 0; j < width_; ++j) {
        buffer_(nonzero, j) = shrunk * dec.v(j, i);
      }
      ++nonzero;
    }
  }
  filled_ = nonzero;
}

DenseMatrix FdSketch::basis(std::size_t k) const {
  if (k < 1 || k > filled_) {
    throw RankError("FdSketch::basis: k = " + std::to_string(k) +
                        " exceeds filled rows " + std::to_string(filled_),
                    filled_);
  }
  const auto dec = svd(buffer_);
  DenseMatrix out(width_, k);
  for (std::size_t i = 0; i < width_; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      out(i, j) = dec.v(i, j);
    }
  }
  // Re-fix signs per column: basis columns stand alone here, unlike the
  // U-keyed convention inside svd().
  for (std::size_t j = 0; j < k; ++j) {
    double peak = 0.0;
    for (std::size_t i = 0; i < width_; ++i) {
      peak = std::max(peak, std::abs(out(i, j)));
    }
    if (peak == 0.0) continue;
    for (std::size_t i = 0; i < width_; ++i) {
      if (std::abs(out(i, j)) > 1e-9 * peak) {
        if (out(i, j) < 0.0) {
          for (std::size_t t = 0; t < width_; ++t) out(t, j) = -out(t, j);
        }
        break;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> FdSketch::serialize() const {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(32 + buffer_.size() * 8);
  append_u64_le(bytes, capacity_);
  append_u64_le(bytes, width_);
  append_u64_le(bytes, filled_);
  append_u64_le(bytes, rows_seen_);
  for (double x : buffer_.values()) {
    append_u64_le(bytes, std::bit_cast<std::uint64_t>(x));
  }
  return bytes;
}

FdSketch FdSketch::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 32) {
    throw FormatError("FdSketch::deserialize: truncated header (" +
                      std::to_string(bytes.size()) + " bytes)");
  }
  const auto l = static_cast<std::size_t>(read_u64_le(bytes, 0));
  const auto m = static_cast<std::size_t>(read_u64_le(bytes, 8));
  const auto filled = static_cast<std::size_t>(read_u64_le(bytes, 16));
  const auto rows_seen = read_u64_le(bytes, 24);

  if (l < 2 || l % 2 != 0 || m < 1 || l > (1u << 20) || m > (1u << 24)) {
    throw FormatError("FdSketch::deserialize: implausible header (l = " +
                      std::to_string(l) + ", m = " + std::to_string(m) + ")");
  }
  const std::size_t expected = 32 + l * m * 8;
  if (bytes.size() != expected) {
    throw FormatError("FdSketch::deserialize: expected " +
                      std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  FdSketch sketch(l, m);
  if (filled > l) {
    throw FormatError("FdSketch::deserialize: filled exceeds capacity");
  }
  for (std::size_t i = 0; i < l * m; ++i) {
    const double x =
        std::bit_cast<double>(read_u64_le(bytes, 32 + i * 8));
    sketch.buffer_.data()[i] = x;
  }
  if (!sketch.buffer_.all_finite()) {
    throw FormatError("FdSketch::deserialize: non-finite buffer entry");
  }
  sketch.filled_ = filled;
  sketch.rows_seen_ = rows_seen;
  return sketch;
}

}  // namespace kpca
