#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "knotcert/int_matrix.hpp"

namespace knotcert::number_theory {

/// F(m) = (m+1)^3 - m^3 = 3m^2 + 3m + 1.
BigInt cubic_difference(const BigInt& m);
/// F'(m) = 6m + 3.
BigInt cubic_difference_derivative(const BigInt& m);

/// |(m+1)^q - m^q|, the order parameter of the q-fold cover of K_{2m+1}.
BigInt order_parameter(const BigInt& m, unsigned q);

/// Largest e with p^e | n. Rejects n = 0 and p < 2.
unsigned exponent_of(const BigInt& p, const BigInt& n);

/// Euler's criterion. Returns -1, 0 or 1. p must be an odd prime.
int legendre_symbol(std::int64_t a, std::uint64_t p);

/// Jacobi symbol via reciprocity; an independent route to the Legendre symbol.
int jacobi_symbol(std::int64_t a, std::uint64_t n);

/// Square root of a quadratic residue a mod an odd prime p (Tonelli-Shanks).
/// Without a seed the smallest non-residue drives the algorithm; with a seed a
/// random non-residue is drawn. Returns nullopt for non-residues.
std::optional<std::uint64_t> sqrt_mod(std::uint64_t a, std::uint64_t p,
                                      std::optional<std::uint64_t> seed = std::nullopt);

/// Roots of 3m^2 + 3m + 1 mod p in ascending order. p must be a prime other than 2 and 3.
std::vector<std::uint64_t> solve_cubic_difference_mod(std::uint64_t p,
                                                      std::optional<std::uint64_t> seed = std::nullopt);

struct PrimeFactor {
  BigInt prime;
  unsigned exponent = 0;
};

/// Trial division; intended for the small values that occur here.
std::vector<PrimeFactor> factor(const BigInt& n);

/// A prime factor of F(prod primes) that is not in the list.
BigInt prime_outside(std::span<const BigInt> primes);

struct PrimeWitness {
  std::uint64_t p = 0;
  std::int64_t m = 0;
  unsigned exponent = 0;  // multiplicity of p in F(m)
};

/// The smallest prime-divisor witness for p with exponent one, using the
/// smallest root of F mod p and, if that root has exponent > 1, the root + p.
/// nullopt when p is 2 mod 3.
std::optional<PrimeWitness> exponent_one_witness(std::uint64_t p,
                                                 std::optional<std::uint64_t> seed = std::nullopt);

/// The first `count` primes dividing some F(m) with exponent one, ascending,
/// searching primes up to `bound`. Throws PreconditionError if the bound runs out.
std::vector<PrimeWitness> list_prime_witnesses(std::size_t count, std::uint64_t bound,
                                               std::optional<std::uint64_t> seed = std::nullopt);

struct FamilyMember {
  std::int64_t m = 0;
  PrimeWitness witness;
};

/// Greedy search over m = 1, 2, ..., bound for pairs (m_i, p_i) with p_i || F(m_i)
/// and p_j not dividing F(m_i) for i != j. Picks the largest admissible prime.
std::vector<FamilyMember> select_independent_family(std::size_t count, std::int64_t search_bound);

}  // namespace knotcert::number_theory
