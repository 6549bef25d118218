#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "knotcert/int_matrix.hpp"

namespace knotcert {

/// Integer polynomial, coefficients from the constant term upward.
struct Polynomial {
  std::vector<BigInt> coeffs;

  BigInt operator()(const BigInt& t) const;
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b);
  std::string to_string() const;
};

/// Square integer matrix of even size with V - V^T unimodular.
class SeifertMatrix {
 public:
  SeifertMatrix() = default;  // the unknot
  /// Throws PreconditionError if the matrix is not a valid Seifert matrix.
  explicit SeifertMatrix(IntMatrix v);

  static SeifertMatrix unknot() { return {}; }
  /// Right-handed trefoil [[-1, 1], [0, -1]].
  static SeifertMatrix trefoil();
  static SeifertMatrix figure_eight();
  /// [[0, m+1], [m, 0]], the two-band surface of K_{2m+1}.
  static SeifertMatrix twisted(std::int64_t m);

  const IntMatrix& matrix() const { return v_; }
  std::size_t size() const { return v_.rows(); }
  std::size_t genus() const { return v_.rows() / 2; }

  /// -V^T
  SeifertMatrix mirror() const;
  /// V^T
  SeifertMatrix reverse() const;
  /// -V, i.e. mirror of the reverse
  SeifertMatrix concordance_inverse() const;

  friend bool operator==(const SeifertMatrix& a, const SeifertMatrix& b) { return a.v_ == b.v_; }

 private:
  IntMatrix v_;
};

/// Block sum; realizes connected sum of knots.
SeifertMatrix connected_sum(const SeifertMatrix& a, const SeifertMatrix& b);

/// det(V - t V^T).
Polynomial alexander_polynomial(const SeifertMatrix& k);

struct SignatureValue {
  int value = 0;
  /// The Hermitian form was singular: omega is a root of the Alexander polynomial.
  bool degenerate = false;
  /// The eigenvalue route was ambiguous and the sign-variation count decided.
  bool used_fallback = false;
};

/// Signature of (1 - w) V + (1 - conj w) V^T at w = exp(2 pi i c / modulus).
/// Requires 0 <= c < modulus and modulus a prime power; c = 0 gives 0.
SignatureValue tristram_levine_signature(const SeifertMatrix& k, std::int64_t c, std::int64_t modulus);

/// Same quantity via Descartes' rule on the characteristic polynomial, which
/// is exact for real-rooted polynomials. Used as a fallback and a cross-check.
SignatureValue signature_by_sign_variations(const SeifertMatrix& k, std::int64_t c, std::int64_t modulus);

/// Parses "unknot", "trefoil", "figure8", "twisted:M", "@path.json", with
/// optional prefixes "-" (concordance inverse) and "mirror:".
SeifertMatrix parse_knot_spec(const std::string& spec);

/// Normalizes a knot spec so that "--trefoil" and "trefoil" compare equal.
std::string canonical_knot_spec(const std::string& spec);
/// The spec of the concordance inverse.
std::string negate_knot_spec(const std::string& spec);

nlohmann::json to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SeifertMatrix& k);
SeifertMatrix seifert_from_json(const nlohmann::json& j);

}  // namespace knotcert
