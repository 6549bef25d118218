#pragma once

#include <cstdint>

namespace knotcert::modular {

// Residue arithmetic for word-sized moduli. Products go through 128-bit
// intermediates so any modulus below 2^63 is safe.

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);

/// Inverse of a modulo n; throws PreconditionError when gcd(a, n) != 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t n);

/// Canonical representative of a signed value in [0, p).
std::uint64_t reduce(std::int64_t a, std::uint64_t p);

/// Signed representative in (-p/2, p/2].
std::int64_t centered(std::uint64_t a, std::uint64_t p);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// True when n = r^k for a prime r and k >= 1.
bool is_prime_power(std::uint64_t n);

}  // namespace knotcert::modular
