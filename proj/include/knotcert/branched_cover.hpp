#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knotcert/fp_linalg.hpp"
#include "knotcert/int_matrix.hpp"
#include "knotcert/seifert.hpp"

namespace knotcert {

/// Gamma^q - (Gamma - I)^q with Gamma = V (V - V^T)^{-1}; its cokernel is
/// H_1 of the q-fold cyclic branched cover. q must be a prime power.
IntMatrix presentation_matrix(const SeifertMatrix& v, unsigned q);

struct CoverHomology {
  unsigned q = 0;
  /// Full Smith diagonal of the presentation matrix (units included).
  std::vector<BigInt> diagonal;
  /// Nontrivial invariant factors; 0 marks a free summand.
  std::vector<BigInt> invariant_factors;
  /// |(m+1)^q - m^q| when built from the twisted family.
  std::optional<BigInt> a;

  BigInt order() const;
  /// e.g. "Z_7 ⊕ Z_7"; "0" when trivial.
  std::string group_string(const std::string& plus = " ⊕ ") const;
};

CoverHomology cover_homology(const SeifertMatrix& v, unsigned q);

/// Homology of the q-fold cover of K_{2m+1}. Checks the Smith diagonal is
/// exactly [a, a] and throws std::logic_error otherwise.
CoverHomology twisted_cover_homology(std::int64_t m, unsigned q);

/// Deck transformation on the p-torsion of the cover of K_{2m+1}:
/// T(L1) = m^{-1}(m+1) L1 and T(L2) = (m+1)^{-1} m L2.
struct DeckAction {
  std::int64_t m = 0;
  unsigned q = 0;
  std::uint64_t p = 0;
  std::uint64_t lambda_plus = 0;   // on L1 and L2'
  std::uint64_t lambda_minus = 0;  // on L2 and L1'
};

/// Throws PreconditionError unless p is an odd prime dividing (m+1)^q - m^q,
/// and when the two eigenvalues coincide mod p.
DeckAction deck_action(std::int64_t m, unsigned q, std::uint64_t p);

/// Lift of a surgery circle in one summand K # K* of the sum.
enum class Lift { L1, L2, L1p, L2p };

std::string to_string(Lift lift);
Lift lift_from_string(const std::string& s);
inline constexpr Lift kLifts[] = {Lift::L1, Lift::L2, Lift::L1p, Lift::L2p};

struct SiteLabel {
  std::size_t summand = 0;
  Lift lift = Lift::L1;
  /// "1:L1'" style, 1-based summand index.
  std::string to_string() const;
};

/// One block K_{2m+1} # K*_{2m+1}; sign -1 is its concordance inverse.
struct SummandSpec {
  std::int64_t m = 0;
  int sign = 1;
};

/// (F_p)^{4n} spanned by the lifts, with the diagonal deck action and the
/// mod-p linking form.
class PTorsionModule {
 public:
  std::uint64_t p() const { return p_; }
  unsigned q() const { return q_; }
  std::uint64_t unit() const { return u_; }
  std::size_t dimension() const { return labels_.size(); }
  std::size_t summand_count() const { return summands_.size(); }
  const std::vector<SummandSpec>& summands() const { return summands_; }
  const std::vector<SiteLabel>& labels() const { return labels_; }
  /// Eigenvalue of T on each basis vector.
  const std::vector<std::uint64_t>& deck_eigenvalues() const { return eigen_; }
  const FpMatrix& linking_form() const { return form_; }
  FpMatrix deck_matrix() const;
  /// The two eigenvalues of T; plus is lambda_plus of the first summand.
  std::uint64_t mu_plus() const { return mu_plus_; }
  std::uint64_t mu_minus() const { return mu_minus_; }
  /// Basis indices spanning the mu_plus (or mu_minus) eigenspace, ascending.
  std::vector<std::size_t> eigenspace_sites(bool plus) const;
  Subspace eigenspace(bool plus) const;

  friend PTorsionModule build_p_torsion(std::span<const SummandSpec>, unsigned, std::uint64_t, std::uint64_t);

 private:
  PTorsionModule(std::uint64_t p, unsigned q, std::uint64_t u) : p_(p), q_(q), u_(u), form_(p, 0, 0) {}

  std::uint64_t p_;
  unsigned q_;
  std::uint64_t u_;
  std::vector<SummandSpec> summands_;
  std::vector<SiteLabel> labels_;
  std::vector<std::uint64_t> eigen_;
  FpMatrix form_;
  std::uint64_t mu_plus_ = 0;
  std::uint64_t mu_minus_ = 0;
};

/// Assembles the p-torsion module of a sum of K_{2m+1} # K*_{2m+1} blocks.
/// The linking form is u*[[0,1],[1,0]] on (L1, L2) and -u*[[0,1],[1,0]] on
/// (L1', L2'), negated for sign -1 summands. Requires p to divide every
/// (m+1)^q - m^q with exponent exactly 1.
PTorsionModule build_p_torsion(std::span<const SummandSpec> summands, unsigned q, std::uint64_t p,
                               std::uint64_t u = 1);

}  // namespace knotcert
