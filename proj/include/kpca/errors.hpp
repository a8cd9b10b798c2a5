#pragma once

#include <stdexcept>
#include <string>

namespace kpca {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operand dimensions do not line up (matmul, kernel evaluation, projection).
struct ShapeError : Error {
  using Error::Error;
};

// An argument violates a precondition (bad tolerance, k out of range, ...).
struct ParamError : Error {
  using Error::Error;
};

// A requested rank exceeds what the data supports. `achievable` carries the
// largest rank the operation could have honored.
struct RankError : Error {
  RankError(const std::string& what, std::size_t achievable_rank)
      : Error(what), achievable(achievable_rank) {}
  std::size_t achievable = 0;
};

// Malformed input file (IDX/CIFAR/CSV parsing).
struct FormatError : Error {
  using Error::Error;
};

// Structurally valid input that cannot be processed: single-class labels,
// a kernel block with no usable spectrum, a split missing a class.
struct DegenerateError : Error {
  using Error::Error;
};

}  // namespace kpca
