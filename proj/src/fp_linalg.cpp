#include "knotcert/fp_linalg.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>
#include <utility>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"

namespace knotcert {

using modular::add_mod;
using modular::inv_mod;
using modular::mul_mod;
using modular::sub_mod;

FpMatrix::FpMatrix(std::uint64_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
  if (p == 2 || p >= (std::uint64_t{1} << 62) || !modular::is_prime(p)) {
    throw PreconditionError("modulus " + std::to_string(p) + " is not an odd prime");
  }
}

FpMatrix FpMatrix::identity(std::uint64_t p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FpMatrix FpMatrix::from_rows(std::uint64_t p, const std::vector<std::vector<std::int64_t>>& rows,
                             std::size_t cols) {
  FpMatrix m(p, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw PreconditionError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.entries_[i * cols + j] = modular::reduce(rows[i][j], p);
  }
  return m;
}

FpMatrix FpMatrix::from_vectors(std::uint64_t p, std::span<const FpVector> rows, std::size_t cols) {
  FpMatrix m(p, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw PreconditionError("vector length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

FpMatrix FpMatrix::reduce(std::uint64_t p, const IntMatrix& a) {
  FpMatrix m(p, a.rows(), a.cols());
  const BigInt mod(std::to_string(p));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      BigInt r = a(i, j) % mod;
      if (r < 0) r += mod;
      m.entries_[i * a.cols() + j] = std::stoull(r.get_str());
    }
  return m;
}

void FpMatrix::set(std::size_t i, std::size_t j, std::uint64_t v) { entries_[i * cols_ + j] = v % p_; }

FpVector FpMatrix::row(std::size_t i) const {
  return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
          entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
  return t;
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  if (a.p_ != b.p_ || a.cols_ != b.rows_) throw PreconditionError("shape or modulus mismatch in *");
  FpMatrix c(a.p_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      std::uint64_t aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        auto& cij = c.entries_[i * c.cols_ + j];
        cij = add_mod(cij, mul_mod(aik, b(k, j), a.p_), a.p_);
      }
    }
  return c;
}

FpVector FpMatrix::apply(std::span<const std::uint64_t> v) const {
  if (v.size() != cols_) throw PreconditionError("vector length mismatch");
  FpVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] = add_mod(out[i], mul_mod((*this)(i, j), v[j], p_), p_);
  return out;
}

std::uint64_t FpMatrix::bilinear(std::span<const std::uint64_t> x, std::span<const std::uint64_t> y) const {
  if (x.size() != rows_) throw PreconditionError("vector length mismatch");
  FpVector my = apply(y);
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < rows_; ++i) s = add_mod(s, mul_mod(x[i], my[i], p_), p_);
  return s;
}

bool FpMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

std::size_t FpMatrix::rank() const {
  FpMatrix r = row_reduce(*this);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < r.rows_; ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < r.cols_ && !nonzero; ++j) nonzero = r(i, j) != 0;
    if (nonzero) ++rank;
  }
  return rank;
}

std::vector<FpVector> FpMatrix::nullspace() const {
  FpMatrix r = row_reduce(*this);
  std::vector<std::size_t> pivot_col;
  for (std::size_t i = 0; i < r.rows_; ++i) {
    std::size_t j = 0;
    while (j < r.cols_ && r(i, j) == 0) ++j;
    if (j == r.cols_) break;
    pivot_col.push_back(j);
  }
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<FpVector> basis;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    FpVector x(cols_, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = sub_mod(0, r(i, f), p_);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::string FpMatrix::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? ", " : "") << (*this)(i, j);
    out << ']';
  }
  out << "] mod " << p_;
  return out.str();
}

FpMatrix row_reduce(const FpMatrix& m) {
  const std::uint64_t p = m.modulus();
  FpMatrix r = m;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < r.cols() && lead < r.rows(); ++col) {
    std::size_t piv = lead;
    while (piv < r.rows() && r(piv, col) == 0) ++piv;
    if (piv == r.rows()) continue;
    if (piv != lead)
      for (std::size_t j = 0; j < r.cols(); ++j) {
        std::uint64_t tmp = r(piv, j);
        r.set(piv, j, r(lead, j));
        r.set(lead, j, tmp);
      }
    std::uint64_t inv = inv_mod(r(lead, col), p);
    for (std::size_t j = 0; j < r.cols(); ++j) r.set(lead, j, mul_mod(r(lead, j), inv, p));
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == lead) continue;
      std::uint64_t f = r(i, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < r.cols(); ++j) r.set(i, j, sub_mod(r(i, j), mul_mod(f, r(lead, j), p), p));
    }
    ++lead;
  }
  return r;
}

// ---------------------------------------------------------------------------

Subspace::Subspace(std::uint64_t p, std::size_t ambient) : p_(p), ambient_(ambient) {
  FpMatrix probe(p, 0, 0);  // validates p
  (void)probe;
}

Subspace Subspace::span(std::uint64_t p, std::size_t ambient, std::span<const FpVector> vectors) {
  Subspace s(p, ambient);
  if (vectors.empty()) return s;
  FpMatrix r = row_reduce(FpMatrix::from_vectors(p, vectors, ambient));
  for (std::size_t i = 0; i < r.rows(); ++i) {
    FpVector row = r.row(i);
    if (std::all_of(row.begin(), row.end(), [](auto x) { return x == 0; })) break;
    s.basis_.push_back(std::move(row));
  }
  return s;
}

Subspace Subspace::whole(std::uint64_t p, std::size_t ambient) {
  Subspace s(p, ambient);
  for (std::size_t i = 0; i < ambient; ++i) {
    FpVector e(ambient, 0);
    e[i] = 1;
    s.basis_.push_back(std::move(e));
  }
  return s;
}

Subspace Subspace::from_canonical(FpMatrix basis) {
  Subspace s(basis.modulus(), basis.cols());
  for (std::size_t i = 0; i < basis.rows(); ++i) s.basis_.push_back(basis.row(i));
  return s;
}

std::vector<std::size_t> Subspace::pivots() const {
  std::vector<std::size_t> out;
  for (const auto& row : basis_) {
    std::size_t j = 0;
    while (row[j] == 0) ++j;
    out.push_back(j);
  }
  return out;
}

bool Subspace::contains(std::span<const std::uint64_t> v) const {
  if (v.size() != ambient_) throw PreconditionError("vector length mismatch");
  // reduce v against the RREF basis using pivots
  FpVector r(v.begin(), v.end());
  auto piv = pivots();
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    std::uint64_t f = r[piv[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < ambient_; ++j) r[j] = sub_mod(r[j], mul_mod(f, basis_[i][j], p_), p_);
  }
  return std::all_of(r.begin(), r.end(), [](auto x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const FpVector& v) { return contains(v); });
}

Subspace Subspace::operator+(const Subspace& other) const {
  std::vector<FpVector> all = basis_;
  all.insert(all.end(), other.basis_.begin(), other.basis_.end());
  return span(p_, ambient_, all);
}

Subspace Subspace::intersect(const Subspace& other) const {
  // x in both  <=>  x = sum a_i u_i = sum b_j w_j ; solve [U; -W]^T (a, b) = 0
  if (dim() == 0 || other.dim() == 0) return Subspace(p_, ambient_);
  const std::size_t k = dim(), l = other.dim();
  FpMatrix system(p_, ambient_, k + l);
  for (std::size_t c = 0; c < ambient_; ++c) {
    for (std::size_t i = 0; i < k; ++i) system.set(c, i, basis_[i][c]);
    for (std::size_t j = 0; j < l; ++j) system.set(c, k + j, sub_mod(0, other.basis_[j][c], p_));
  }
  std::vector<FpVector> vectors;
  for (const auto& coeff : system.nullspace()) {
    FpVector x(ambient_, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < ambient_; ++c) x[c] = add_mod(x[c], mul_mod(coeff[i], basis_[i][c], p_), p_);
    vectors.push_back(std::move(x));
  }
  return span(p_, ambient_, vectors);
}

Subspace Subspace::image(const FpMatrix& m) const {
  std::vector<FpVector> vectors;
  for (const auto& v : basis_) vectors.push_back(m.apply(v));
  return span(p_, ambient_, vectors);
}

std::string Subspace::key() const {
  std::string s = std::to_string(p_) + "|" + std::to_string(ambient_) + "|";
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (i) s += ';';
    for (std::size_t j = 0; j < ambient_; ++j) {
      if (j) s += ',';
      s += std::to_string(basis_[i][j]);
    }
  }
  return s;
}

bool operator<(const Subspace& a, const Subspace& b) {
  return std::tie(a.p_, a.ambient_, a.basis_) < std::tie(b.p_, b.ambient_, b.basis_);
}

Subspace annihilator(const Subspace& s, const FpMatrix& form) {
  if (form.modulus() != s.modulus() || form.rows() != s.ambient() || !form.is_symmetric())
    throw PreconditionError("annihilator needs a symmetric form on the ambient space");
  if (!form.is_nonsingular()) throw PreconditionError("annihilator needs a nonsingular form");
  if (s.dim() == 0) return Subspace::whole(s.modulus(), s.ambient());
  // x in Ann(S)  <=>  (S * form) x = 0
  FpMatrix rows = FpMatrix::from_vectors(s.modulus(), s.basis(), s.ambient()) * form;
  auto null = rows.nullspace();
  return Subspace::span(s.modulus(), s.ambient(), null);
}

BigInt gaussian_binomial(std::size_t d, std::size_t k, std::uint64_t p) {
  if (k > d) return 0;
  const BigInt q(std::to_string(p));
  BigInt num = 1, den = 1;
  for (std::size_t i = 0; i < k; ++i) {
    BigInt a, b;
    mpz_pow_ui(a.get_mpz_t(), q.get_mpz_t(), d - i);
    mpz_pow_ui(b.get_mpz_t(), q.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

// ---------------------------------------------------------------------------

SubspaceStream::SubspaceStream(std::size_t d, std::size_t k, std::uint64_t p, std::uint64_t budget)
    : d_(d), k_(k), p_(p) {
  if (k > d) throw PreconditionError("subspace dimension exceeds ambient dimension");
  FpMatrix probe(p, 0, 0);
  (void)probe;
  total_ = gaussian_binomial(d, k, p);
  if (total_ > BigInt(std::to_string(budget))) {
    throw BudgetExceeded("enumerating " + total_.get_str() + " subspaces of dimension " + std::to_string(k) +
                         " in F_" + std::to_string(p) + "^" + std::to_string(d) + " exceeds the budget of " +
                         std::to_string(budget));
  }
  pivots_.resize(k);
  for (std::size_t i = 0; i < k; ++i) pivots_[i] = i;
  reset_free();
}

void SubspaceStream::reset_free() {
  free_slots_.clear();
  std::vector<bool> is_pivot(d_, false);
  for (auto c : pivots_) is_pivot[c] = true;
  for (std::size_t r = 0; r < k_; ++r)
    for (std::size_t c = pivots_[r] + 1; c < d_; ++c)
      if (!is_pivot[c]) free_slots_.emplace_back(r, c);
  free_values_.assign(free_slots_.size(), 0);
}

bool SubspaceStream::advance_pivots() {
  // next k-combination of {0..d-1} in lexicographic order
  if (k_ == 0) return false;
  std::size_t i = k_;
  while (i > 0) {
    --i;
    if (pivots_[i] < d_ - k_ + i) {
      ++pivots_[i];
      for (std::size_t j = i + 1; j < k_; ++j) pivots_[j] = pivots_[j - 1] + 1;
      reset_free();
      return true;
    }
  }
  return false;
}

std::optional<Subspace> SubspaceStream::next() {
  if (exhausted_) return std::nullopt;
  if (!fresh_) {
    // odometer over free entries, then over pivot sets
    std::size_t i = 0;
    while (i < free_values_.size() && ++free_values_[i] == p_) free_values_[i++] = 0;
    if (i == free_values_.size() && !advance_pivots()) {
      exhausted_ = true;
      return std::nullopt;
    }
  }
  fresh_ = false;
  FpMatrix basis(p_, k_, d_);
  for (std::size_t r = 0; r < k_; ++r) basis.set(r, pivots_[r], 1);
  for (std::size_t s = 0; s < free_slots_.size(); ++s)
    basis.set(free_slots_[s].first, free_slots_[s].second, free_values_[s]);
  return Subspace::from_canonical(std::move(basis));
}

std::vector<Subspace> enumerate_subspaces(std::size_t d, std::size_t k, std::uint64_t p, std::uint64_t budget) {
  SubspaceStream stream(d, k, p, budget);
  std::vector<Subspace> out;
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

}  // namespace knotcert
