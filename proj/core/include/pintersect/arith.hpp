#pragma once

// Word-size modular arithmetic and factorization helpers shared by every module.

#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace pintersect {

using u64 = std::uint64_t;
using i64 = std::int64_t;
__extension__ typedef unsigned __int128 u128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}
u64 powmod(u64 base, u64 exp, u64 m);

/// Inverse of a modulo m, or nullopt when gcd(a, m) > 1.
std::optional<u64> invmod(u64 a, u64 m);

/// x mod m in [0, m) for signed x.
inline u64 reduce_signed(i64 x, u64 m) {
  i64 r = x % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}
u64 reduce_big(const mpz_class& x, u64 m);

struct PrimePower {
  u64 prime;
  int exponent;
  u64 value;  // prime^exponent
};

/// Trial-division factorization, primes in increasing order. factorize(1) is empty.
std::vector<PrimePower> factorize(u64 n);

u64 euler_phi(u64 n);
bool is_prime_u64(u64 n);

/// p-adic valuation; returns `cap` when x == 0.
int valuation(const mpz_class& x, u64 p, int cap = 1 << 20);

mpz_class big_pow(u64 base, unsigned long exp);

/// x ≡ r1 (mod m1), x ≡ r2 (mod m2) with gcd(m1, m2) = 1; result in [0, m1·m2).
mpz_class crt_pair(const mpz_class& r1, const mpz_class& m1, const mpz_class& r2, const mpz_class& m2);

}  // namespace pintersect
