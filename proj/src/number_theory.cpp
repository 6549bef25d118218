#include "knotcert/number_theory.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "knotcert/errors.hpp"
#include "knotcert/modular.hpp"

namespace knotcert::number_theory {

namespace {

BigInt big(std::int64_t v) { return BigInt(std::to_string(v)); }
BigInt big(std::uint64_t v) { return BigInt(std::to_string(v)); }

void require_odd_prime(std::uint64_t p) {
  if (p == 2 || !modular::is_prime(p)) throw PreconditionError(std::to_string(p) + " is not an odd prime");
}

}  // namespace

BigInt cubic_difference(const BigInt& m) { return 3 * m * m + 3 * m + 1; }

BigInt cubic_difference_derivative(const BigInt& m) { return 6 * m + 3; }

BigInt order_parameter(const BigInt& m, unsigned q) {
  BigInt a, b;
  BigInt m1 = m + 1;
  mpz_pow_ui(a.get_mpz_t(), m1.get_mpz_t(), q);
  mpz_pow_ui(b.get_mpz_t(), m.get_mpz_t(), q);
  return abs(a - b);
}

unsigned exponent_of(const BigInt& p, const BigInt& n) {
  if (n == 0) throw PreconditionError("exponent_of: n must be nonzero");
  if (p < 2) throw PreconditionError("exponent_of: p must be at least 2");
  BigInt r = abs(n);
  unsigned e = 0;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  return e;
}

int legendre_symbol(std::int64_t a, std::uint64_t p) {
  require_odd_prime(p);
  std::uint64_t r = modular::reduce(a, p);
  if (r == 0) return 0;
  return modular::pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int jacobi_symbol(std::int64_t a, std::uint64_t n) {
  if (n == 0 || n % 2 == 0) throw PreconditionError("jacobi_symbol needs an odd positive modulus");
  std::uint64_t x = modular::reduce(a, n);
  int result = 1;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      if (n % 8 == 3 || n % 8 == 5) result = -result;
    }
    std::swap(x, n);
    if (x % 4 == 3 && n % 4 == 3) result = -result;
    x %= n;
  }
  return n == 1 ? result : 0;
}

std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p, std::optional<std::uint64_t> seed) {
  require_odd_prime(p);
  a %= p;
  if (a == 0) return 0;
  if (legendre_symbol(static_cast<std::int64_t>(a), p) != 1) return std::nullopt;
  if (p % 4 == 3) return modular::pow_mod(a, (p + 1) / 4, p);

  std::uint64_t q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  std::uint64_t z = 2;
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::uniform_int_distribution<std::uint64_t> dist(2, p - 1);
    do {
      z = dist(rng);
    } while (legendre_symbol(static_cast<std::int64_t>(z), p) != -1);
  } else {
    while (legendre_symbol(static_cast<std::int64_t>(z), p) != -1) ++z;
  }
  std::uint64_t c = modular::pow_mod(z, q, p);
  std::uint64_t x = modular::pow_mod(a, (q + 1) / 2, p);
  std::uint64_t t = modular::pow_mod(a, q, p);
  unsigned m = s;
  while (t != 1) {
    unsigned i = 0;
    std::uint64_t t2 = t;
    while (t2 != 1) {
      t2 = modular::mul_mod(t2, t2, p);
      ++i;
    }
    std::uint64_t b = c;
    for (unsigned j = 0; j + i + 1 < m; ++j) b = modular::mul_mod(b, b, p);
    x = modular::mul_mod(x, b, p);
    c = modular::mul_mod(b, b, p);
    t = modular::mul_mod(t, c, p);
    m = i;
  }
  return x;
}

std::vector<std::uint64_t> solve_cubic_difference_mod(std::uint64_t p, std::optional<std::uint64_t> seed) {
  require_odd_prime(p);
  if (p == 3) throw PreconditionError("p = 3 never divides 3m^2 + 3m + 1");
  // m = (-3 +- sqrt(-3)) / 6; discriminant 9 - 12 = -3
  auto root = sqrt_mod(modular::reduce(-3, p), p, seed);
  if (!root) return {};
  const std::uint64_t inv6 = modular::inv_mod(6 % p, p);
  const std::uint64_t minus3 = modular::reduce(-3, p);
  std::vector<std::uint64_t> roots{
      modular::mul_mod(modular::add_mod(minus3, *root, p), inv6, p),
      modular::mul_mod(modular::sub_mod(minus3, *root, p), inv6, p),
  };
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<PrimeFactor> factor(const BigInt& n) {
  if (n == 0) throw PreconditionError("cannot factor 0");
  BigInt r = abs(n);
  std::vector<PrimeFactor> out;
  auto is_probable_prime = [](const BigInt& x) { return mpz_probab_prime_p(x.get_mpz_t(), 30) > 0; };
  if (r > 1 && is_probable_prime(r)) return {{r, 1}};
  if (r.fits_ulong_p()) {
    unsigned long x = r.get_ui();
    for (unsigned long d = 2; d * d <= x; d += (d == 2 ? 1 : 2)) {
      unsigned e = 0;
      while (x % d == 0) {
        x /= d;
        ++e;
      }
      if (e) {
        out.push_back({BigInt(d), e});
        if (x > 1 && modular::is_prime(x)) break;
      }
    }
    if (x > 1) out.push_back({BigInt(x), 1});
    return out;
  }
  for (BigInt d = 2; d * d <= r; d += (d == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (r % d == 0) {
      r /= d;
      ++e;
    }
    if (e) {
      out.push_back({d, e});
      if (r > 1 && is_probable_prime(r)) break;
    }
  }
  if (r > 1) out.push_back({r, 1});
  return out;
}

BigInt prime_outside(std::span<const BigInt> primes) {
  BigInt n = 1;
  for (const auto& p : primes) n *= p;
  // none of the listed primes divides F(N) = 3N^2 + 3N + 1 since F(N) = 1 mod each
  for (const auto& f : factor(cubic_difference(n))) {
    if (std::find(primes.begin(), primes.end(), f.prime) == primes.end()) return f.prime;
  }
  throw std::logic_error("F(N) had no new prime factor");
}

std::optional<PrimeWitness> exponent_one_witness(std::uint64_t p, std::optional<std::uint64_t> seed) {
  require_odd_prime(p);
  if (p == 3) return std::nullopt;
  auto roots = solve_cubic_difference_mod(p, seed);
  if (roots.empty()) return std::nullopt;
  const BigInt bp = big(p);
  for (std::int64_t m : {static_cast<std::int64_t>(roots.front()), static_cast<std::int64_t>(roots.front() + p)}) {
    unsigned e = exponent_of(bp, cubic_difference(big(m)));
    if (e == 1) return PrimeWitness{p, m, e};
  }
  throw std::logic_error("root shift by p failed to produce exponent one");
}

std::vector<PrimeWitness> list_prime_witnesses(std::size_t count, std::uint64_t bound,
                                               std::optional<std::uint64_t> seed) {
  std::vector<PrimeWitness> out;
  for (std::uint64_t p = 5; p <= bound && out.size() < count; p += 2) {
    if (!modular::is_prime(p)) continue;
    if (auto w = exponent_one_witness(p, seed)) out.push_back(*w);
  }
  if (out.size() < count) {
    throw PreconditionError("only " + std::to_string(out.size()) + " witnesses below bound " + std::to_string(bound));
  }
  return out;
}

std::vector<FamilyMember> select_independent_family(std::size_t count, std::int64_t search_bound) {
  if (count == 0) throw PreconditionError("family size must be at least 1");
  std::vector<FamilyMember> chosen;
  std::vector<BigInt> chosen_values;
  for (std::int64_t m = 1; m <= search_bound && chosen.size() < count; ++m) {
    const BigInt value = cubic_difference(big(m));
    bool clash = false;
    for (const auto& c : chosen)
      if (value % big(c.witness.p) == 0) clash = true;
    if (clash) continue;
    auto factors = factor(value);
    std::optional<PrimeFactor> pick;
    for (const auto& f : factors) {
      if (f.exponent != 1) continue;
      bool divides_other = std::any_of(chosen_values.begin(), chosen_values.end(),
                                       [&](const BigInt& v) { return v % f.prime == 0; });
      if (divides_other) continue;
      if (!pick || f.prime > pick->prime) pick = f;
    }
    if (!pick) continue;
    if (!pick->prime.fits_ulong_p()) throw PreconditionError("family prime exceeds word size");
    chosen.push_back({m, PrimeWitness{pick->prime.get_ui(), m, 1}});
    chosen_values.push_back(value);
  }
  if (chosen.size() < count) {
    throw PreconditionError("bound exhausted: found " + std::to_string(chosen.size()) + " of " +
                            std::to_string(count) + " family members with m <= " + std::to_string(search_bound));
  }
  return chosen;
}

}  // namespace knotcert::number_theory
