#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace knotcert {

using BigInt = mpz_class;

/// Dense integer matrix with arbitrary-precision entries, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  /// Throws PreconditionError on ragged input.
  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& rows);
  static IntMatrix diagonal(const std::vector<BigInt>& entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  BigInt& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  /// Bounds-checked access.
  const BigInt& at(std::size_t i, std::size_t j) const;

  IntMatrix transpose() const;
  IntMatrix operator-() const;
  IntMatrix& operator+=(const IntMatrix& other);
  IntMatrix& operator-=(const IntMatrix& other);
  IntMatrix operator*(const BigInt& scalar) const;

  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) { return a += b; }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) { return a -= b; }
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  IntMatrix pow(unsigned exponent) const;

  /// Fraction-free Bareiss elimination. The empty matrix has determinant 1.
  BigInt determinant() const;

  /// Exact inverse of a matrix with determinant +-1.
  IntMatrix unimodular_inverse() const;

  /// Block-diagonal direct sum [[a, 0], [0, b]].
  static IntMatrix direct_sum(const IntMatrix& a, const IntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> entries_;
};

/// Invariant factors d_1 | d_2 | ... of an integer matrix. The diagonal has
/// min(rows, cols) entries, all non-negative; zeros come last.
struct SmithForm {
  std::vector<BigInt> diagonal;
  std::size_t rows = 0;
  std::size_t cols = 0;
  // When retained: left * A * right == diag(diagonal), both unimodular.
  std::optional<IntMatrix> left;
  std::optional<IntMatrix> right;

  /// Rank of Z^rows / image(A).
  std::size_t free_rank() const;
  /// Invariant factors greater than one.
  std::vector<BigInt> torsion() const;
  /// Order of the torsion subgroup of the cokernel.
  BigInt torsion_order() const;
  /// e.g. "Z_7 + Z_7"; "0" for the trivial group.
  std::string cokernel_string(const std::string& plus = " + ") const;
};

SmithForm smith_normal_form(const IntMatrix& a, bool retain_transforms = false);

}  // namespace knotcert
