#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"
#include "knotcert/seifert.hpp"

namespace knotcert {

namespace {

constexpr double kZeroTolerance = 1e-9;
constexpr double kAmbiguousBand = 1e-6;

void check_evaluation_point(std::int64_t c, std::int64_t modulus) {
  if (modulus < 2 || !modular::is_prime_power(static_cast<std::uint64_t>(modulus)))
    throw PreconditionError("signature modulus " + std::to_string(modulus) + " is not a prime power");
  if (c < 0 || c >= modulus)
    throw PreconditionError("signature numerator " + std::to_string(c) + " outside [0, " + std::to_string(modulus) + ")");
}

double to_double(const BigInt& x) { return x.get_d(); }

Eigen::MatrixXcd hermitian_form(const SeifertMatrix& k, std::int64_t c, std::int64_t modulus) {
  const IntMatrix& v = k.matrix();
  const std::size_t n = v.rows();
  const long double theta = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(c) /
                            static_cast<long double>(modulus);
  const std::complex<double> w(static_cast<double>(std::cos(theta)), static_cast<double>(std::sin(theta)));
  const std::complex<double> a = 1.0 - w;
  const std::complex<double> b = std::conj(a);
  Eigen::MatrixXcd h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a * to_double(v(i, j)) + b * to_double(v(j, i));
  return h;
}

}  // namespace

SignatureValue signature_by_sign_variations(const SeifertMatrix& k, std::int64_t c, std::int64_t modulus) {
  check_evaluation_point(c, modulus);
  if (c == 0 || k.size() == 0) return {};
  const Eigen::MatrixXcd h = hermitian_form(k, c, modulus);
  const Eigen::Index n = h.rows();
  using cld = std::complex<long double>;
  std::vector<std::vector<cld>> a(n, std::vector<cld>(n));
  long double scale = 1.0L;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      a[i][j] = cld(h(i, j).real(), h(i, j).imag());
      scale = std::max(scale, std::abs(a[i][j]) * static_cast<long double>(n));
    }
  // Faddeev-LeVerrier: det(xI - A) = x^n + c_1 x^{n-1} + ... + c_n
  std::vector<long double> coeff(n + 1, 0.0L);
  coeff[0] = 1.0L;
  std::vector<std::vector<cld>> m(n, std::vector<cld>(n, cld(0)));
  for (Eigen::Index kk = 1; kk <= n; ++kk) {
    // M_k = A M_{k-1} + c_{k-1} I
    std::vector<std::vector<cld>> next(n, std::vector<cld>(n, cld(0)));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l) next[i][j] += a[i][l] * m[l][j];
      next[i][i] += coeff[kk - 1];
    }
    m = std::move(next);
    cld trace(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index l = 0; l < n; ++l) trace += a[i][l] * m[l][i];
    coeff[kk] = -trace.real() / static_cast<long double>(kk);
  }
  auto sign_of = [&](std::size_t power_from_top) {
    long double tol = 1e-9L * std::pow(scale, static_cast<long double>(power_from_top));
    long double x = coeff[power_from_top];
    return std::abs(x) <= tol ? 0 : (x > 0 ? 1 : -1);
  };
  // trailing zero coefficients are zero eigenvalues
  std::size_t zero_roots = 0;
  while (zero_roots < static_cast<std::size_t>(n) && sign_of(n - zero_roots) == 0) ++zero_roots;
  auto variations = [&](bool negate_x) {
    int count = 0, last = 0;
    for (std::size_t d = 0; d + zero_roots <= static_cast<std::size_t>(n); ++d) {
      int s = sign_of(d);
      if (s == 0) continue;
      // coefficient d multiplies x^{n-d}; substituting -x flips odd powers
      if (negate_x && ((n - static_cast<Eigen::Index>(d)) % 2 != 0)) s = -s;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  const int positive = variations(false);
  const int negative = variations(true);
  return {positive - negative, zero_roots > 0, true};
}

SignatureValue tristram_levine_signature(const SeifertMatrix& k, std::int64_t c, std::int64_t modulus) {
  check_evaluation_point(c, modulus);
  if (c == 0 || k.size() == 0) return {};
  const Eigen::MatrixXcd h = hermitian_form(k, c, modulus);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eig = solver.eigenvalues();
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff() * static_cast<double>(h.rows()));
  int positive = 0, negative = 0, zero = 0;
  bool ambiguous = solver.info() != Eigen::Success;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double mag = std::abs(eig(i)) / scale;
    if (mag <= kZeroTolerance) {
      ++zero;
    } else {
      if (mag < kAmbiguousBand) ambiguous = true;
      (eig(i) > 0 ? positive : negative)++;
    }
  }
  SignatureValue out{positive - negative, zero > 0, false};
  // a nonsingular even-size form has an even signature
  if (!out.degenerate && out.value % 2 != 0) ambiguous = true;
  if (ambiguous) return signature_by_sign_variations(k, c, modulus);
  return out;
}

}  // namespace knotcert
