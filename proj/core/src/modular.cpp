#include "pintersect/arith.hpp"

#include <stdexcept>

namespace pintersect {

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

std::optional<u64> invmod(u64 a, u64 m) {
  if (m == 1) return 0;
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) return std::nullopt;
  return reduce_signed(t, m);
}

u64 reduce_big(const mpz_class& x, u64 m) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m);
  return r.get_ui();
}

std::vector<PrimePower> factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  std::vector<PrimePower> out;
  auto take = [&](u64 p) {
    int e = 0;
    u64 v = 1;
    while (n % p == 0) {
      n /= p;
      v *= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e, v});
  };
  take(2);
  take(3);
  for (u64 p = 5; p * p <= n; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

u64 euler_phi(u64 n) {
  u64 phi = n;
  for (const auto& pp : factorize(n)) phi = phi / pp.prime * (pp.prime - 1);
  return phi;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // Deterministic witness set for 64-bit n.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int valuation(const mpz_class& x, u64 p, int cap) {
  if (x == 0) return cap;
  mpz_class y = x;
  int v = 0;
  while (v < cap && mpz_divisible_ui_p(y.get_mpz_t(), p)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
    ++v;
  }
  return v;
}

mpz_class big_pow(u64 base, unsigned long exp) {
  mpz_class r;
  mpz_class b(static_cast<unsigned long>(base));
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), exp);
  return r;
}

mpz_class crt_pair(const mpz_class& r1, const mpz_class& m1, const mpz_class& r2, const mpz_class& m2) {
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t()) == 0) {
    if (m2 == 1) return mpz_class(r1 % m1 + m1) % m1;
    throw std::invalid_argument("crt_pair: moduli not coprime");
  }
  mpz_class t = ((r2 - r1) % m2) * inv % m2;
  if (t < 0) t += m2;
  mpz_class x = r1 + m1 * t;
  mpz_class m = m1 * m2;
  x %= m;
  if (x < 0) x += m;
  return x;
}

}  // namespace pintersect
