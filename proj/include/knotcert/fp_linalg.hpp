#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knotcert/int_matrix.hpp"

namespace knotcert {

using FpVector = std::vector<std::uint64_t>;

/// Matrix over F_p for an odd prime p below 2^62. Entries are always reduced.
class FpMatrix {
 public:
  /// Throws PreconditionError unless p is an odd prime.
  FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols);
  static FpMatrix identity(std::uint64_t p, std::size_t n);
  static FpMatrix from_rows(std::uint64_t p, const std::vector<std::vector<std::int64_t>>& rows,
                            std::size_t cols);
  static FpMatrix from_vectors(std::uint64_t p, std::span<const FpVector> rows, std::size_t cols);
  /// Reduction of an integer matrix mod p.
  static FpMatrix reduce(std::uint64_t p, const IntMatrix& m);

  std::uint64_t modulus() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  /// Stores v mod p.
  void set(std::size_t i, std::size_t j, std::uint64_t v);

  FpVector row(std::size_t i) const;
  FpMatrix transpose() const;
  friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
  friend bool operator==(const FpMatrix& a, const FpMatrix& b) = default;

  FpVector apply(std::span<const std::uint64_t> v) const;
  /// x^T M y.
  std::uint64_t bilinear(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) const;

  bool is_symmetric() const;
  std::size_t rank() const;
  bool is_nonsingular() const { return rows_ == cols_ && rank() == rows_; }

  /// Basis of {x : M x = 0}, as rows.
  std::vector<FpVector> nullspace() const;

  std::string to_string() const;

 private:
  std::uint64_t p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> entries_;
};

/// Reduced row-echelon form over F_p (Gauss-Jordan). Row space is preserved;
/// zero rows move to the bottom.
FpMatrix row_reduce(const FpMatrix& m);

/// Subspace of F_p^d held as its canonical RREF basis (no zero rows), so two
/// subspaces are equal exactly when their bases are.
class Subspace {
 public:
  Subspace(std::uint64_t p, std::size_t ambient);  // zero subspace
  static Subspace span(std::uint64_t p, std::size_t ambient, std::span<const FpVector> vectors);
  static Subspace whole(std::uint64_t p, std::size_t ambient);
  /// The argument must already be in RREF with no zero rows.
  static Subspace from_canonical(FpMatrix basis);

  std::uint64_t modulus() const { return p_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<FpVector>& basis() const { return basis_; }
  /// Pivot column of each basis row.
  std::vector<std::size_t> pivots() const;

  bool contains(std::span<const std::uint64_t> v) const;
  bool contains(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  Subspace operator+(const Subspace& other) const;
  /// Image under a square matrix.
  Subspace image(const FpMatrix& m) const;

  /// Stable textual key, e.g. "7|4|1,0,0,3;0,1,2,0".
  std::string key() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.p_ == b.p_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const Subspace& a, const Subspace& b);

 private:
  std::uint64_t p_;
  std::size_t ambient_;
  std::vector<FpVector> basis_;
};

/// {x : form(x, s) = 0 for all s in S}. Rejects a singular or non-symmetric form.
Subspace annihilator(const Subspace& s, const FpMatrix& form);

/// Number of k-dimensional subspaces of F_p^d.
BigInt gaussian_binomial(std::size_t d, std::size_t k, std::uint64_t p);

inline constexpr std::uint64_t kDefaultSubspaceBudget = 1'000'000;

/// Lazily yields every k-dimensional subspace of F_p^d exactly once, ordered
/// by pivot set then by free entries.
class SubspaceStream {
 public:
  /// Throws BudgetExceeded when the count exceeds the budget.
  SubspaceStream(std::size_t d, std::size_t k, std::uint64_t p,
                 std::uint64_t budget = kDefaultSubspaceBudget);

  std::optional<Subspace> next();
  const BigInt& total() const { return total_; }

 private:
  bool advance_pivots();
  void reset_free();

  std::size_t d_;
  std::size_t k_;
  std::uint64_t p_;
  BigInt total_;
  std::vector<std::size_t> pivots_;
  std::vector<std::pair<std::size_t, std::size_t>> free_slots_;
  std::vector<std::uint64_t> free_values_;
  bool exhausted_ = false;
  bool fresh_ = true;
};

/// Convenience wrapper over SubspaceStream.
std::vector<Subspace> enumerate_subspaces(std::size_t d, std::size_t k, std::uint64_t p,
                                          std::uint64_t budget = kDefaultSubspaceBudget);

}  // namespace knotcert
