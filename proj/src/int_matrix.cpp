#include "knotcert/int_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "knotcert/errors.hpp"

namespace knotcert {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, BigInt(0)) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1;
  return id;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows) {
  if (rows.empty()) return {};
  IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw PreconditionError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<BigInt>& entries) {
  IntMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

const BigInt& IntMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("IntMatrix index out of range");
  return (*this)(i, j);
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator-() const {
  IntMatrix n = *this;
  for (auto& e : n.entries_) e = -e;
  return n;
}

IntMatrix& IntMatrix::operator+=(const IntMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw PreconditionError("shape mismatch in +");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

IntMatrix& IntMatrix::operator-=(const IntMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw PreconditionError("shape mismatch in -");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

IntMatrix IntMatrix::operator*(const BigInt& scalar) const {
  IntMatrix r = *this;
  for (auto& e : r.entries_) e *= scalar;
  return r;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw PreconditionError("shape mismatch in *");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const BigInt& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

IntMatrix IntMatrix::pow(unsigned exponent) const {
  if (!is_square()) throw PreconditionError("pow of non-square matrix");
  IntMatrix result = identity(rows_);
  IntMatrix base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

BigInt IntMatrix::determinant() const {
  if (!is_square()) throw PreconditionError("determinant of non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  IntMatrix m = *this;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;  // exact
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix IntMatrix::unimodular_inverse() const {
  if (!is_square()) throw PreconditionError("inverse of non-square matrix");
  const std::size_t n = rows_;
  // Gauss-Jordan over Q; for det = +-1 the result is integral.
  std::vector<mpq_class> aug(n * 2 * n);
  auto cell = [&](std::size_t i, std::size_t j) -> mpq_class& { return aug[i * 2 * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cell(i, j) = (*this)(i, j);
    cell(i, n + i) = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && cell(piv, c) == 0) ++piv;
    if (piv == n) throw PreconditionError("matrix is singular");
    if (piv != c)
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(cell(piv, j), cell(c, j));
    mpq_class inv = 1 / cell(c, c);
    for (std::size_t j = 0; j < 2 * n; ++j) cell(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || cell(i, c) == 0) continue;
      mpq_class f = cell(i, c);
      for (std::size_t j = 0; j < 2 * n; ++j) cell(i, j) -= f * cell(c, j);
    }
  }
  IntMatrix result(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class v = cell(i, n + j);
      v.canonicalize();
      if (v.get_den() != 1) throw PreconditionError("matrix is not unimodular");
      result(i, j) = v.get_num();
    }
  return result;
}

IntMatrix IntMatrix::direct_sum(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix s(a.rows_ + b.rows_, a.cols_ + b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) s(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) s(a.rows_ + i, a.cols_ + j) = b(i, j);
  return s;
}

std::string IntMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j).get_str();
    out << ']';
  }
  out << ']';
  return out.str();
}

// ---------------------------------------------------------------------------
// Smith normal form by repeated gcd pivoting.

namespace {

struct SnfWork {
  IntMatrix d;
  IntMatrix left;
  IntMatrix right;
  bool track;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < d.cols(); ++j) std::swap(d(a, j), d(b, j));
    if (track)
      for (std::size_t j = 0; j < left.cols(); ++j) std::swap(left(a, j), left(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < d.rows(); ++i) std::swap(d(i, a), d(i, b));
    if (track)
      for (std::size_t i = 0; i < right.rows(); ++i) std::swap(right(i, a), right(i, b));
  }
  // row[dst] += f * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t j = 0; j < d.cols(); ++j) d(dst, j) += f * d(src, j);
    if (track)
      for (std::size_t j = 0; j < left.cols(); ++j) left(dst, j) += f * left(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t i = 0; i < d.rows(); ++i) d(i, dst) += f * d(i, src);
    if (track)
      for (std::size_t i = 0; i < right.rows(); ++i) right(i, dst) += f * right(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < d.cols(); ++j) d(r, j) = -d(r, j);
    if (track)
      for (std::size_t j = 0; j < left.cols(); ++j) left(r, j) = -left(r, j);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a, bool retain_transforms) {
  const std::size_t m = a.rows(), n = a.cols();
  SnfWork w{a, retain_transforms ? IntMatrix::identity(m) : IntMatrix{},
            retain_transforms ? IntMatrix::identity(n) : IntMatrix{}, retain_transforms};
  const std::size_t r = std::min(m, n);

  for (std::size_t t = 0; t < r; ++t) {
    // smallest nonzero |entry| in the trailing block becomes the pivot
    auto move_min_to_pivot = [&]() -> bool {
      std::size_t bi = m, bj = n;
      BigInt best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const BigInt& e = w.d(i, j);
          if (e != 0 && (bi == m || abs(e) < best)) {
            best = abs(e);
            bi = i;
            bj = j;
          }
        }
      if (bi == m) return false;
      w.swap_rows(t, bi);
      w.swap_cols(t, bj);
      return true;
    };
    if (!move_min_to_pivot()) break;

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (w.d(i, t) == 0) continue;
        BigInt q = w.d(i, t) / w.d(t, t);
        w.add_row(i, t, -q);
        if (w.d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (w.d(t, j) == 0) continue;
        BigInt q = w.d(t, j) / w.d(t, t);
        w.add_col(j, t, -q);
        if (w.d(t, j) != 0) clean = false;
      }
      if (!clean) {
        move_min_to_pivot();
        continue;
      }
      // pivot must divide the whole trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (w.d(i, j) % w.d(t, t) != 0) {
            w.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (w.d(t, t) < 0) w.negate_row(t);
  }

  SmithForm form;
  form.rows = m;
  form.cols = n;
  form.diagonal.reserve(r);
  for (std::size_t t = 0; t < r; ++t) form.diagonal.push_back(w.d(t, t));
  if (retain_transforms) {
    form.left = std::move(w.left);
    form.right = std::move(w.right);
  }
  return form;
}

std::size_t SmithForm::free_rank() const {
  std::size_t nonzero = 0;
  for (const auto& d : diagonal)
    if (d != 0) ++nonzero;
  return rows - nonzero;
}

std::vector<BigInt> SmithForm::torsion() const {
  std::vector<BigInt> out;
  for (const auto& d : diagonal)
    if (d > 1) out.push_back(d);
  return out;
}

BigInt SmithForm::torsion_order() const {
  BigInt order = 1;
  for (const auto& d : torsion()) order *= d;
  return order;
}

std::string SmithForm::cokernel_string(const std::string& plus) const {
  std::vector<std::string> parts;
  for (const auto& d : torsion()) parts.push_back("Z_" + d.get_str());
  for (std::size_t k = 0; k < free_rank(); ++k) parts.push_back("Z");
  if (parts.empty()) return "0";
  std::string s = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) s += plus + parts[k];
  return s;
}

}  // namespace knotcert
