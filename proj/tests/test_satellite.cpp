#include <random>

#include "doctest.h"
#include "knotcert/errors.hpp"
#include "knotcert/satellite.hpp"

using namespace knotcert;

namespace {

// Exact right-trefoil signature at c/p (see test_seifert.cpp).
int trefoil_exact(std::uint64_t c, std::uint64_t p) {
  if (c % p == 0) return 0;
  const std::uint64_t r = c % p;
  return (6 * r > p && 6 * r < 5 * p) ? -2 : 0;
}

int orbit_oracle(std::uint64_t c, std::uint64_t lambda, unsigned q, std::uint64_t p, int sign) {
  int total = 0;
  std::uint64_t alpha = c % p;
  for (unsigned j = 0; j < q; ++j) {
    total += sign * trefoil_exact(alpha, p);
    alpha = alpha * lambda % p;
  }
  return total;
}

}  // namespace

TEST_CASE("cg_delta examples") {
  const SeifertMatrix j = SeifertMatrix::trefoil();
  CHECK(cg_delta(j, 0, 2, 3, 7) == 0);
  CHECK(cg_delta(j, 1, 2, 3, 7) == -4);
  CHECK(cg_delta(j, 3, 2, 3, 7) == -4);
  const OrbitSum orbit = cg_orbit(SignatureTable(j, 7), 3, 2, 3, 7);
  CHECK(orbit.alphas == std::vector<std::uint64_t>{3, 6, 5});
  CHECK(orbit.signatures == std::vector<int>{-2, 0, -2});
  CHECK_THROWS_AS(cg_delta(j, 1, 3, 3, 7), PreconditionError);
}

TEST_CASE("cg_delta against the exact trefoil oracle") {
  for (std::uint64_t p : {7ULL, 13ULL, 19ULL, 31ULL, 37ULL, 43ULL}) {
    const SignatureTable right(SeifertMatrix::trefoil(), p);
    const SignatureTable left(SeifertMatrix::trefoil().mirror(), p);
    for (std::uint64_t lambda = 1; lambda < p; ++lambda) {
      if (lambda * lambda % p * lambda % p != 1) continue;
      for (std::uint64_t c = 0; c < p; ++c) {
        CHECK(cg_orbit(right, c, lambda, 3, p).total == orbit_oracle(c, lambda, 3, p, 1));
        CHECK(cg_orbit(left, c, lambda, 3, p).total == orbit_oracle(c, lambda, 3, p, -1));
      }
    }
  }
}

TEST_CASE("cg_delta properties: mirror negation and orbit constancy") {
  const std::vector<SeifertMatrix> knots{SeifertMatrix::trefoil(), SeifertMatrix::figure_eight(),
                                         connected_sum(SeifertMatrix::trefoil(), SeifertMatrix::trefoil()),
                                         SeifertMatrix::twisted(2)};
  for (const auto& j : knots) {
    for (std::uint64_t p : {7ULL, 13ULL}) {
      const SignatureTable t(j, p);
      const SignatureTable tm(j.mirror(), p);
      for (std::uint64_t lambda = 1; lambda < p; ++lambda) {
        if (lambda * lambda % p * lambda % p != 1) continue;
        for (std::uint64_t c = 0; c < p; ++c) {
          const int d = cg_orbit(t, c, lambda, 3, p).total;
          CHECK(cg_orbit(tm, c, lambda, 3, p).total == -d);
          CHECK(cg_orbit(t, c * lambda % p, lambda, 3, p).total == d);
        }
      }
    }
  }
}

TEST_CASE("amphicheiral template") {
  const SatelliteSum k = SatelliteSum::amphicheiral(1, "trefoil", 2);
  REQUIRE(k.summands.size() == 2);
  CHECK(k.summands[0].companion(Lift::L1).spec == "trefoil");
  CHECK(k.summands[0].companion(Lift::L2).spec == "-trefoil");
  CHECK(k.summands[0].companion(Lift::L1p).spec == "-trefoil");
  CHECK(k.summands[0].companion(Lift::L2p).spec == "trefoil");
  // Companions never change the Seifert form.
  CHECK(k.summands[0].seifert_form() == SatelliteSum::amphicheiral(1, "unknot", 1).summands[0].seifert_form());
  CHECK(k.seifert_form().size() == 8);
  const SatelliteSum inv = SatelliteSum::amphicheiral(1, "trefoil", 1, true);
  CHECK(inv.summands[0].mirrored);
  CHECK(inv.summand_specs()[0].sign == -1);
  CHECK(inv.summands[0].companion(Lift::L1).spec == "-trefoil");
  CHECK(satellite_from_json(to_json(k)).summands.size() == 2);
  CHECK(to_json(satellite_from_json(to_json(k))) == to_json(k));
}

TEST_CASE("satellite JSON accepts inline companion matrices") {
  const auto j = nlohmann::json::parse(R"({"summands":[{"m":1,"mirrored":false,
    "companions":{"L1":[[-1,1],[0,-1]],"L2":"-trefoil","L1'":"-trefoil","L2'":"trefoil"}}]})");
  const SatelliteSum k = satellite_from_json(j);
  CHECK(k.summands[0].companion(Lift::L1).matrix == SeifertMatrix::trefoil());
  CHECK_THROWS_AS(satellite_from_json(nlohmann::json::parse(R"({"summands":[]})")), PreconditionError);
}

TEST_CASE("obstruction_sum examples") {
  const SatelliteSum k = SatelliteSum::amphicheiral(1, "trefoil", 1);
  const std::vector<SummandSpec> specs = k.summand_specs();
  const PTorsionModule mod = build_p_torsion(specs, 3, 7);
  const ObstructionSum trivial = obstruction_sum(k, Character::trivial(7, 4), mod);
  CHECK(trivial.signature_total == 0);
  CHECK(trivial.unknown_terms == 1);
  CHECK(trivial.contributions.empty());

  // v = L1 vanishes on the E+ metabolizer; chi_v is u at L2 only.
  const FpVector l1{1, 0, 0, 0};
  const Character chi = Character::linking_dual(mod, l1);
  CHECK(chi.values == FpVector{0, 1, 0, 0});
  const ObstructionSum s = obstruction_sum(k, chi, mod);
  CHECK(s.signature_total == cg_delta(SeifertMatrix::trefoil().concordance_inverse(), 1, 4, 3, 7));
  CHECK(std::abs(s.signature_total) == 4);

  // v = L1 + L2' hits both lambda_minus sites.
  const FpVector plus_sum{1, 0, 0, 1};
  const ObstructionSum both = obstruction_sum(k, Character::linking_dual(mod, plus_sum), mod);
  CHECK(both.contributions.size() == 2);
  CHECK(std::abs(both.signature_total) == 8);

  // Only unknot companions: nothing to add.
  const SatelliteSum plain = SatelliteSum::amphicheiral(1, "unknot", 1);
  CHECK(obstruction_sum(plain, Character::linking_dual(mod, plus_sum), mod).signature_total == 0);

  const PTorsionModule two = build_p_torsion(SatelliteSum::amphicheiral(1, "trefoil", 2).summand_specs(), 3, 7);
  CHECK_THROWS_AS(obstruction_sum(k, Character::trivial(7, 8), two), PreconditionError);
}

TEST_CASE("obstruction_sum property: additive over disjointly supported characters") {
  SatelliteSum k = SatelliteSum::amphicheiral(1, "trefoil", 1);
  k.summands.push_back(SatelliteSum::amphicheiral(1, "figure8", 1, true).summands[0]);
  k.summands.push_back(SatelliteSum::amphicheiral(1, "mirror:trefoil", 1).summands[0]);
  const PTorsionModule mod = build_p_torsion(k.summand_specs(), 3, 7);
  std::mt19937 rng(41);
  std::uniform_int_distribution<std::uint64_t> entry(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    Character a = Character::trivial(7, 12);
    Character b = Character::trivial(7, 12);
    Character ab = Character::trivial(7, 12);
    for (std::size_t i = 0; i < 12; ++i) {
      const std::uint64_t x = entry(rng);
      (i < 4 || (i >= 8 && trial % 2) ? a : b).values[i] = x;
      ab.values[i] = x;
    }
    const long sa = obstruction_sum(k, a, mod).signature_total;
    const long sb = obstruction_sum(k, b, mod).signature_total;
    CHECK(obstruction_sum(k, ab, mod).signature_total == sa + sb);
    CHECK(ab(FpVector(12, 1)) == (a(FpVector(12, 1)) + b(FpVector(12, 1))) % 7);
  }
}
