#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "knotcert/branched_cover.hpp"
#include "knotcert/fp_linalg.hpp"
#include "knotcert/satellite.hpp"

namespace knotcert {

/// How the uncomputed sigma(K-bar, chi_i) terms are treated.
///  Refined: all zero, so a record is obstructed when its total is nonzero.
///  Bounded: each bounded by C in absolute value, so obstructed when |total| > n*C.
///  Both: report both verdicts.
enum class Mode { Refined, Bounded, Both };

struct ModeSpec {
  Mode mode = Mode::Refined;
  /// Decimal or fraction text of C; kept verbatim for certificates.
  std::string bound_text = "0";

  bool refined() const { return mode != Mode::Bounded; }
  bool bounded() const { return mode != Mode::Refined; }
  mpq_class bound() const;
  std::string name() const;
  static ModeSpec parse(const std::string& mode, const std::string& bound = "0");
};

enum class Verdict { NonSlice, Inconclusive };
std::string to_string(Verdict v);

/// Deck-invariant half-dimensional subspace H = A + B with A in the mu_plus
/// eigenspace and B = Ann(A) meet the mu_minus eigenspace.
struct Metabolizer {
  Subspace plus_part;
  Subspace minus_part;
  Subspace whole;
};

/// Sum over k of the number of k-dimensional subspaces of the mu_plus eigenspace.
BigInt metabolizer_count(const PTorsionModule& module);

/// Every metabolizer, each exactly once, by eigenspace splitting. Throws
/// BudgetExceeded when metabolizer_count exceeds the budget.
std::vector<Metabolizer> enumerate_metabolizers(const PTorsionModule& module,
                                                std::uint64_t budget = kDefaultSubspaceBudget);

/// Reference enumeration: every half-dimensional subspace of the whole module
/// filtered by H = Ann(H) and T(H) = H. Exponential; test use only.
std::vector<Subspace> brute_force_metabolizers(const PTorsionModule& module,
                                               std::uint64_t budget = kDefaultSubspaceBudget);

/// A vector of H whose linking character is nonzero at as many sites as
/// possible. Candidates are 0/1 sums of the canonical basis rows of the plus
/// part or of the minus part; ties go to the lexicographically smallest.
FpVector find_witness_vector(const Metabolizer& h, const PTorsionModule& module);

struct MetabolizerRecord {
  Subspace h;
  std::size_t plus_dim = 0;
  FpVector v;
  Character chi;
  ObstructionSum sum;
  bool refined_violates = false;
  bool bounded_violates = false;
};

struct ObstructionCertificate {
  SatelliteSum knot;
  std::uint64_t p = 0;
  unsigned q = 3;
  std::uint64_t u = 1;
  ModeSpec mode;
  std::uint64_t mu_plus = 0;
  std::uint64_t mu_minus = 0;
  std::vector<std::string> sites;
  FpMatrix linking_form{7, 0, 0};
  BigInt metabolizer_count;
  std::vector<MetabolizerRecord> records;
  /// Smallest nonzero |orbit sum| over the companions in use, if any.
  std::optional<int> min_orbit_magnitude;
  std::optional<Verdict> refined_verdict;
  std::optional<Verdict> bounded_verdict;
  Verdict verdict = Verdict::Inconclusive;
};

struct CertifyOptions {
  std::uint64_t u = 1;
  std::uint64_t budget = kDefaultSubspaceBudget;
  unsigned jobs = 1;
};

ObstructionCertificate certify_nonslice(const SatelliteSum& k, std::uint64_t p, unsigned q, const ModeSpec& mode,
                                        const CertifyOptions& options = {});

/// certify_nonslice on n copies of the amphicheiral knot for n = 1..max_n.
std::vector<ObstructionCertificate> certify_infinite_order(std::int64_t m, const std::string& companion,
                                                           std::uint64_t p, std::size_t max_n,
                                                           const ModeSpec& mode, unsigned q = 3,
                                                           const CertifyOptions& options = {});

struct FamilyEntry {
  std::int64_t m = 0;
  std::string companion;
  std::uint64_t p = 0;
};

/// A summand of the combination that is invisible at the target prime.
struct ReductionStep {
  std::size_t index = 0;
  std::int64_t m = 0;
  BigInt a;                  // |(m+1)^q - m^q|
  unsigned p_exponent = 0;   // must be 0
  std::string homology;
};

struct IndependenceCertificate {
  std::vector<FamilyEntry> family;
  std::vector<std::int64_t> coefficients;
  unsigned q = 3;
  std::size_t target = 0;
  std::vector<ReductionStep> reduction;
  ObstructionCertificate sub;
  Verdict verdict = Verdict::Inconclusive;
};

/// Checks the family preconditions (distinct primes, exponent one, p_i not
/// dividing a_j for i != j), then certifies sum c_i K-bar_i at the prime of the
/// first nonzero coefficient, where every other summand has no p-torsion.
IndependenceCertificate independence_certificate(const std::vector<FamilyEntry>& family,
                                                 const std::vector<std::int64_t>& coefficients,
                                                 const ModeSpec& mode, unsigned q = 3,
                                                 const CertifyOptions& options = {});

std::vector<FamilyEntry> family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<FamilyEntry>& family);

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ObstructionCertificate& c);
nlohmann::json to_json(const IndependenceCertificate& c);
nlohmann::json unit_sweep_json(const std::vector<ObstructionCertificate>& certs);
nlohmann::json series_json(const std::vector<ObstructionCertificate>& certs);

/// Byte form used for certificate files.
std::string canonical_dump(const nlohmann::json& j);

struct VerifyReport {
  bool ok = true;
  std::size_t records_checked = 0;
  std::vector<std::string> failures;
};

/// Re-derives every record of a certificate of any kind from its stored data,
/// then regenerates the certificate from its inputs and compares bytes with
/// `original_bytes` (skipped when empty).
VerifyReport verify_certificate(const nlohmann::json& cert, const std::string& original_bytes = {},
                                unsigned jobs = 1);

}  // namespace knotcert
