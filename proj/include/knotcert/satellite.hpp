#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "knotcert/branched_cover.hpp"
#include "knotcert/seifert.hpp"

namespace knotcert {

/// A knot whose complement replaces a neighborhood of one surgery circle.
struct Companion {
  std::string spec;  // canonical knot spec, see parse_knot_spec
  SeifertMatrix matrix;

  static Companion parse(const std::string& spec);
  Companion inverse() const;
};

struct SatelliteSummand {
  std::int64_t m = 0;
  /// Enters the sum as its concordance inverse.
  bool mirrored = false;
  /// Indexed by Lift: L1, L2, L1', L2'.
  std::array<Companion, 4> companions;

  const Companion& companion(Lift l) const { return companions[static_cast<std::size_t>(l)]; }
  /// Seifert form of K_{2m+1} # K*_{2m+1}; companions never change it.
  SeifertMatrix seifert_form() const;
};

/// Formal connected sum of companion-decorated blocks.
struct SatelliteSum {
  std::vector<SatelliteSummand> summands;

  /// n copies of the amphicheiral knot: L1, L2' carry J and L2, L1' carry -J.
  /// `mirrored` produces copies of its concordance inverse instead.
  static SatelliteSum amphicheiral(std::int64_t m, const std::string& companion_spec, std::size_t copies,
                                   bool mirrored = false);

  std::vector<SummandSpec> summand_specs() const;
  SeifertMatrix seifert_form() const;
};

nlohmann::json to_json(const SatelliteSum& k);
/// Accepts companion values as knot-spec strings or inline integer matrices.
SatelliteSum satellite_from_json(const nlohmann::json& j);

/// A homomorphism from the p-torsion module to Z_p, given by its values on
/// the basis.
struct Character {
  std::uint64_t p = 0;
  FpVector values;

  static Character trivial(std::uint64_t p, std::size_t dim) { return {p, FpVector(dim, 0)}; }
  /// x -> lk(x, v).
  static Character linking_dual(const PTorsionModule& module, std::span<const std::uint64_t> v);
  std::uint64_t operator()(std::span<const std::uint64_t> x) const;
  bool is_trivial() const;
};

/// Levine-Tristram signatures of one knot at every c/p, computed once.
class SignatureTable {
 public:
  SignatureTable(const SeifertMatrix& k, std::uint64_t p);
  int operator()(std::uint64_t c) const { return values_[c % values_.size()].value; }
  bool degenerate(std::uint64_t c) const { return values_[c % values_.size()].degenerate; }

 private:
  std::vector<SignatureValue> values_;
};

struct OrbitSum {
  std::vector<std::uint64_t> alphas;  // lambda^j c mod p, j = 0..q-1
  std::vector<int> signatures;
  int total = 0;
  bool degenerate = false;
};

/// Sum over the deck orbit of c of the signatures of J; the change in the
/// Casson-Gordon invariant from one companion insertion. Requires lambda^q = 1 mod p.
OrbitSum cg_orbit(const SignatureTable& j, std::uint64_t c, std::uint64_t lambda, unsigned q, std::uint64_t p);
int cg_delta(const SeifertMatrix& j, std::uint64_t c, std::uint64_t lambda, unsigned q, std::uint64_t p);

struct SiteContribution {
  std::size_t site = 0;
  std::uint64_t value = 0;  // character value at the site
  std::string companion;
  OrbitSum orbit;
};

struct ObstructionSum {
  long signature_total = 0;
  /// One uncomputed sigma(K-bar, chi_i) term per summand.
  std::size_t unknown_terms = 0;
  std::vector<SiteContribution> contributions;
  bool degenerate = false;
};

/// Lookup of signature tables by canonical companion spec.
using SignatureTables = std::map<std::string, SignatureTable>;
SignatureTables signature_tables(const SatelliteSum& k, std::uint64_t p);

/// Sum of cg_orbit over every companion site where chi is nonzero.
ObstructionSum obstruction_sum(const SatelliteSum& k, const Character& chi, const PTorsionModule& module,
                               const SignatureTables& tables);
ObstructionSum obstruction_sum(const SatelliteSum& k, const Character& chi, const PTorsionModule& module);

}  // namespace knotcert
