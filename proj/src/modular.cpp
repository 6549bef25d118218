#include "knotcert/modular.hpp"

#include <array>
#include <string>

#include "knotcert/errors.hpp"

namespace knotcert::modular {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  if (s >= p || s < a) s -= p;
  return s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  if (p == 1) return 0;
  std::uint64_t result = 1;
  base %= p;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    exp >>= 1U;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t n) {
  // extended Euclid on signed 128-bit to dodge overflow in the cofactors
  __int128 old_r = static_cast<__int128>(a % n), r = static_cast<__int128>(n);
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) {
    throw PreconditionError(std::to_string(a) + " is not invertible modulo " + std::to_string(n));
  }
  __int128 inv = old_s % static_cast<__int128>(n);
  if (inv < 0) inv += n;
  return static_cast<std::uint64_t>(inv);
}

std::uint64_t reduce(std::int64_t a, std::uint64_t p) {
  __int128 r = static_cast<__int128>(a) % static_cast<__int128>(p);
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

std::int64_t centered(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a > p / 2) return -static_cast<std::int64_t>(p - a);
  return static_cast<std::int64_t>(a);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kBases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : kBases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t b : kBases) {
    std::uint64_t x = pow_mod(b, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime_power(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t r = 2; r * r <= n; ++r) {
    if (n % r == 0) {
      while (n % r == 0) n /= r;
      return n == 1;
    }
  }
  return true;
}

}  // namespace knotcert::modular
