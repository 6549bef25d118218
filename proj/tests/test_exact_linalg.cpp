#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "knotcert/errors.hpp"
#include "knotcert/fp_linalg.hpp"
#include "knotcert/int_matrix.hpp"
#include "knotcert/modular.hpp"

using namespace knotcert;

namespace {

IntMatrix make(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<BigInt>> big;
  for (const auto& r : rows) big.emplace_back(r.begin(), r.end());
  return IntMatrix::from_rows(big);
}

std::vector<BigInt> ints(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

// Independent cokernel oracle for a square nonsingular A: the image contains
// D * Z^n with D = |det A|, so coker A = (Z/D)^n / S where S is the subgroup
// generated by the columns of A mod D. The group is pinned down by the sizes
// of its k-torsion subgroups |G[k]| = #{x : kx in S} / |S| for every k | D.
std::map<long, long> torsion_profile_by_enumeration(const IntMatrix& a) {
  const std::size_t n = a.rows();
  const long d = std::abs(a.determinant().get_si());
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= d;
  auto encode = [&](const std::vector<long>& x) {
    long code = 0;
    for (long xi : x) code = code * d + xi;
    return code;
  };
  std::vector<std::vector<long>> gens;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<long> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = ((a(i, j).get_si() % d) + d) % d;
    gens.push_back(g);
  }
  std::unordered_set<long> subgroup{0};
  std::vector<std::vector<long>> frontier{std::vector<long>(n, 0)};
  while (!frontier.empty()) {
    std::vector<std::vector<long>> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        std::vector<long> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = (x[i] + g[i]) % d;
        if (subgroup.insert(encode(y)).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  std::map<long, long> profile;
  for (long k = 1; k <= d; ++k) {
    if (d % k != 0) continue;
    long hits = 0;
    std::vector<long> x(n, 0);
    for (long idx = 0; idx < total; ++idx) {
      long rest = idx;
      for (std::size_t i = n; i-- > 0;) {
        x[i] = rest % d;
        rest /= d;
      }
      std::vector<long> kx(n);
      for (std::size_t i = 0; i < n; ++i) kx[i] = (k * x[i]) % d;
      if (subgroup.count(encode(kx))) ++hits;
    }
    profile[k] = hits / static_cast<long>(subgroup.size());
  }
  return profile;
}

std::map<long, long> torsion_profile_from_factors(const std::vector<BigInt>& diag, long d) {
  std::map<long, long> profile;
  for (long k = 1; k <= d; ++k) {
    if (d % k != 0) continue;
    long size = 1;
    for (const auto& f : diag) size *= std::gcd(k, f.get_si());
    profile[k] = size;
  }
  return profile;
}

// Rank over Q: for entries |x| <= 5 and size <= 4 every minor is below 10^5,
// so rank mod a prime above that equals the rational rank.
std::size_t rational_rank(const IntMatrix& a) {
  if (a.empty()) return 0;
  return FpMatrix::reduce(1'000'003, a).rank();
}

}  // namespace

TEST_CASE("smith_normal_form examples") {
  CHECK(smith_normal_form(IntMatrix::diagonal(ints({7, 7}))).diagonal == ints({7, 7}));
  CHECK(smith_normal_form(make({{2, 0}, {0, 3}})).diagonal == ints({1, 6}));
  const SmithForm zero = smith_normal_form(IntMatrix(2, 2));
  CHECK(zero.diagonal == ints({0, 0}));
  CHECK(zero.free_rank() == 2);
  CHECK(smith_normal_form(make({{2, 0}, {0, 3}})).cokernel_string() == "Z_6");
  CHECK(smith_normal_form(IntMatrix::identity(3)).cokernel_string() == "0");
}

TEST_CASE("[[2,0],[0,3]] cokernel is cyclic of order 6 by enumeration") {
  // Z^2 / <(2,0),(0,3)>: the class of (1,1) has order lcm(2,3) = 6.
  std::set<std::pair<int, int>> orbit;
  for (int k = 0; k < 12; ++k) orbit.insert({k % 2, k % 3});
  CHECK(orbit.size() == 6);
  CHECK(torsion_profile_by_enumeration(make({{2, 0}, {0, 3}})) ==
        torsion_profile_from_factors(ints({1, 6}), 6));
}

TEST_CASE("smith_normal_form property: random small matrices against the enumeration oracle") {
  std::mt19937 rng(20261019);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<int> size(1, 4);
  int square_checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = size(rng);
    const std::size_t c = size(rng);
    IntMatrix a(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) a(i, j) = entry(rng);
    const SmithForm s = smith_normal_form(a, true);
    CAPTURE(a.to_string());
    REQUIRE(s.diagonal.size() == std::min(r, c));
    // Divisibility chain, non-negativity, zeros last.
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      CHECK(s.diagonal[i] >= 0);
      if (s.diagonal[i] == 0) CHECK(s.diagonal[i + 1] == 0);
      else CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    }
    // Transforms are unimodular and diagonalize A.
    REQUIRE(s.left.has_value());
    REQUIRE(s.right.has_value());
    CHECK(abs(s.left->determinant()) == 1);
    CHECK(abs(s.right->determinant()) == 1);
    IntMatrix d(r, c);
    for (std::size_t i = 0; i < s.diagonal.size(); ++i) d(i, i) = s.diagonal[i];
    CHECK(*s.left * a * *s.right == d);
    CHECK(s.free_rank() == r - rational_rank(a));

    if (r == c && a.determinant() != 0) {
      const long det = std::abs(a.determinant().get_si());
      CHECK(s.torsion_order() == det);
      long states = 1;
      for (std::size_t i = 0; i < r; ++i) states *= det;
      if (states <= 200'000) {
        CHECK(torsion_profile_by_enumeration(a) == torsion_profile_from_factors(s.diagonal, det));
        ++square_checked;
      }
    }
  }
  CHECK(square_checked > 40);
}

TEST_CASE("smith_normal_form is idempotent on its own diagonal") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = entry(rng);
    const SmithForm s = smith_normal_form(a);
    CHECK(smith_normal_form(IntMatrix::diagonal(s.diagonal)).diagonal == s.diagonal);
  }
}

TEST_CASE("IntMatrix arithmetic never overflows") {
  IntMatrix big = IntMatrix::diagonal(ints({3, 2}));
  const IntMatrix p = big.pow(100);
  BigInt three_100 = 1;
  for (int i = 0; i < 100; ++i) three_100 *= 3;
  CHECK(p(0, 0) == three_100);
  CHECK(p.determinant() == three_100 * (BigInt(1) << 100));
  CHECK_THROWS_AS(big.at(2, 0), std::out_of_range);
  CHECK_THROWS_AS(IntMatrix::from_rows({{1, 2}, {3}}), PreconditionError);
  CHECK(IntMatrix().determinant() == 1);
  const IntMatrix u = make({{2, 1}, {1, 1}});
  CHECK(u * u.unimodular_inverse() == IntMatrix::identity(2));
}

TEST_CASE("modular helpers") {
  using namespace knotcert::modular;
  CHECK(inv_mod(2, 7) == 4);
  CHECK_THROWS_AS(inv_mod(7, 49), PreconditionError);
  CHECK(reduce(-3, 7) == 4);
  CHECK(centered(6, 7) == -1);
  // Miller-Rabin against a sieve.
  std::vector<bool> sieve(5000, true);
  sieve[0] = sieve[1] = false;
  for (std::size_t i = 2; i < sieve.size(); ++i)
    if (sieve[i])
      for (std::size_t j = i * i; j < sieve.size(); j += i) sieve[j] = false;
  for (std::uint64_t n = 0; n < sieve.size(); ++n) CHECK(is_prime(n) == sieve[n]);
  CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
  CHECK_FALSE(is_prime(3215031751ULL));     // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(is_prime_power(49));
  CHECK(is_prime_power(7));
  CHECK_FALSE(is_prime_power(12));
  CHECK_FALSE(is_prime_power(1));
}

TEST_CASE("row_reduce examples") {
  CHECK(row_reduce(FpMatrix::identity(7, 3)) == FpMatrix::identity(7, 3));
  CHECK(row_reduce(FpMatrix::from_rows(7, {{2, 4}}, 2)) == FpMatrix::from_rows(7, {{1, 2}}, 2));
  CHECK(FpMatrix::from_rows(7, {{1, 1}, {2, 2}}, 2).rank() == 1);
  CHECK_THROWS_AS(FpMatrix(4, 1, 1), PreconditionError);
  CHECK_THROWS_AS(FpMatrix(2, 1, 1), PreconditionError);
}

TEST_CASE("row_reduce property: RREF shape and preserved row space") {
  std::mt19937 rng(11);
  for (std::uint64_t p : {5ULL, 7ULL, 13ULL}) {
    std::uniform_int_distribution<std::int64_t> entry(0, static_cast<std::int64_t>(p) - 1);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::vector<std::int64_t>> rows(3, std::vector<std::int64_t>(5));
      for (auto& r : rows)
        for (auto& x : r) x = entry(rng);
      if (trial % 3 == 0)
        for (std::size_t j = 0; j < 5; ++j) rows[2][j] = rows[0][j] + 2 * rows[1][j];
      const FpMatrix m = FpMatrix::from_rows(p, rows, 5);
      const FpMatrix r = row_reduce(m);
      std::size_t last_pivot = 0;
      bool seen_zero = false;
      for (std::size_t i = 0; i < r.rows(); ++i) {
        std::size_t lead = r.cols();
        for (std::size_t j = 0; j < r.cols(); ++j)
          if (r(i, j) != 0) {
            lead = j;
            break;
          }
        if (lead == r.cols()) {
          seen_zero = true;
          continue;
        }
        CHECK_FALSE(seen_zero);
        if (i > 0) CHECK(lead > last_pivot);
        last_pivot = lead;
        CHECK(r(i, lead) == 1);
        for (std::size_t k = 0; k < r.rows(); ++k)
          if (k != i) CHECK(r(k, lead) == 0);
      }
      std::vector<FpVector> a, b;
      for (std::size_t i = 0; i < 3; ++i) {
        a.push_back(m.row(i));
        b.push_back(r.row(i));
      }
      CHECK(Subspace::span(p, 5, a) == Subspace::span(p, 5, b));
    }
  }
}

TEST_CASE("annihilator examples") {
  const FpMatrix hyperbolic = FpMatrix::from_rows(7, {{0, 1}, {1, 0}}, 2);
  CHECK(annihilator(Subspace::whole(7, 2), hyperbolic).dim() == 0);
  CHECK(annihilator(Subspace(7, 2), hyperbolic) == Subspace::whole(7, 2));
  const std::vector<FpVector> e1{{1, 0}};
  CHECK(annihilator(Subspace::span(7, 2, e1), hyperbolic) == Subspace::span(7, 2, e1));
  CHECK_THROWS_AS(annihilator(Subspace(7, 2), FpMatrix::from_rows(7, {{1, 1}, {1, 1}}, 2)), PreconditionError);
  CHECK_THROWS_AS(annihilator(Subspace(7, 2), FpMatrix::from_rows(7, {{0, 1}, {2, 0}}, 2)), PreconditionError);
}

TEST_CASE("annihilator property: dimension count, orthogonality, involution") {
  std::mt19937 rng(3);
  const std::uint64_t p = 7;
  std::uniform_int_distribution<std::int64_t> entry(0, 6);
  int checked = 0;
  while (checked < 60) {
    FpMatrix form(p, 4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j) {
        const auto v = static_cast<std::uint64_t>(entry(rng));
        form.set(i, j, v);
        form.set(j, i, v);
      }
    if (!form.is_nonsingular()) continue;
    std::vector<FpVector> gens(static_cast<std::size_t>(checked % 5), FpVector(4));
    for (auto& g : gens)
      for (auto& x : g) x = static_cast<std::uint64_t>(entry(rng));
    const Subspace s = Subspace::span(p, 4, gens);
    const Subspace ann = annihilator(s, form);
    CHECK(ann.dim() == 4 - s.dim());
    for (const auto& x : ann.basis())
      for (const auto& y : s.basis()) CHECK(form.bilinear(x, y) == 0);
    CHECK(annihilator(ann, form) == s);
    ++checked;
  }
}

TEST_CASE("gaussian_binomial matches the product formula") {
  CHECK(gaussian_binomial(2, 1, 7) == 8);
  CHECK(gaussian_binomial(4, 2, 7) == BigInt((2401 - 1) * (343 - 1)) / ((49 - 1) * (7 - 1)));
  CHECK(gaussian_binomial(4, 2, 7) == 2850);
  CHECK(gaussian_binomial(5, 0, 3) == 1);
  CHECK(gaussian_binomial(3, 4, 3) == 0);
}

TEST_CASE("enumerate_subspaces examples") {
  const auto lines = enumerate_subspaces(2, 1, 7);
  CHECK(lines.size() == 8);
  // Exhaustive listing: each nonzero vector spans a line, and every line is hit.
  std::set<std::string> by_vectors;
  for (std::uint64_t a = 0; a < 7; ++a)
    for (std::uint64_t b = 0; b < 7; ++b)
      if (a || b) {
        const std::vector<FpVector> v{{a, b}};
        by_vectors.insert(Subspace::span(7, 2, v).key());
      }
  std::set<std::string> listed;
  for (const auto& s : lines) listed.insert(s.key());
  CHECK(listed == by_vectors);

  const auto zero = enumerate_subspaces(3, 0, 5);
  REQUIRE(zero.size() == 1);
  CHECK(zero.front().dim() == 0);
  CHECK(enumerate_subspaces(3, 3, 5).size() == 1);
}

TEST_CASE("enumerate_subspaces property: distinct canonical forms, count equals Gaussian binomial") {
  for (auto [d, k, p] : {std::tuple{4, 2, 7ULL}, std::tuple{3, 1, 5ULL}, std::tuple{4, 1, 3ULL},
                         std::tuple{5, 2, 3ULL}, std::tuple{4, 3, 5ULL}}) {
    SubspaceStream stream(d, k, p);
    std::set<std::string> keys;
    std::size_t count = 0;
    while (auto s = stream.next()) {
      CHECK(s->dim() == static_cast<std::size_t>(k));
      CHECK(row_reduce(FpMatrix::from_vectors(p, s->basis(), d)) == FpMatrix::from_vectors(p, s->basis(), d));
      keys.insert(s->key());
      ++count;
    }
    CHECK(count == keys.size());
    CHECK(BigInt(count) == gaussian_binomial(d, k, p));
    CHECK(stream.total() == gaussian_binomial(d, k, p));
  }
  CHECK(enumerate_subspaces(4, 2, 7).size() == 2850);
}

TEST_CASE("enumerate_subspaces enforces the budget") {
  CHECK_THROWS_AS(SubspaceStream(8, 4, 7), BudgetExceeded);
  CHECK_THROWS_AS(SubspaceStream(4, 2, 7, 2849), BudgetExceeded);
  CHECK_NOTHROW(SubspaceStream(4, 2, 7, 2850));
}

TEST_CASE("Subspace lattice operations") {
  const std::uint64_t p = 5;
  const std::vector<FpVector> a{{1, 0, 0}, {0, 1, 0}};
  const std::vector<FpVector> b{{0, 1, 0}, {0, 0, 1}};
  const Subspace sa = Subspace::span(p, 3, a);
  const Subspace sb = Subspace::span(p, 3, b);
  CHECK((sa + sb).dim() == 3);
  CHECK(sa.intersect(sb).dim() == 1);
  CHECK(sa.intersect(sb).contains(FpVector{0, 3, 0}));
  CHECK_FALSE(sa.contains(FpVector{0, 0, 1}));
  CHECK(sa.contains(sa.intersect(sb)));
  const FpMatrix swap = FpMatrix::from_rows(p, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}, 3);
  CHECK(sa.image(swap) == sb);
  CHECK(sa.pivots() == std::vector<std::size_t>{0, 1});
  CHECK(sa.key() == "5|3|1,0,0;0,1,0");
  CHECK(FpMatrix::from_rows(p, {{1, 2}, {0, 1}}, 2).nullspace().empty());
  const auto null = FpMatrix::from_rows(p, {{1, 2}}, 2).nullspace();
  REQUIRE(null.size() == 1);
  CHECK((null[0][0] + 2 * null[0][1]) % p == 0);
}
