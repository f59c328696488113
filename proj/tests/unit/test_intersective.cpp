#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pintersect/errors.hpp"
#include "pintersect/intersective.hpp"

using namespace pintersect;

namespace {

std::vector<u64> brute_roots(const IntPoly& h, u64 q) {
  std::vector<u64> out;
  for (u64 r = 0; r < q; ++r)
    if (h.eval_mod(r, q) == 0) out.push_back(r);
  return out;
}

const IntPoly kXsq1{-1, 0, 1};
const IntPoly kXsqX{0, -1, 1};

}  // namespace

TEST_CASE("roots_mod examples") {
  CHECK(roots_mod(kXsq1, 8) == std::vector<u64>{1, 3, 5, 7});
  CHECK(roots_mod(kXsq1, 5) == std::vector<u64>{1, 4});
  CHECK(roots_mod(IntPoly{0, 0, 1}, 2) == std::vector<u64>{0});
  CHECK(roots_mod(kXsq1, 1) == std::vector<u64>{0});
}

TEST_CASE("roots_mod agrees with brute force beyond the cross-check threshold") {
  std::mt19937_64 rng(21);
  RootsModOptions no_check{0};
  const std::vector<IntPoly> polys = {kXsq1, kXsqX, IntPoly{0, 0, 1}, IntPoly{1, -2, 1}, IntPoly{0, -1, 0, 1},
                                      IntPoly{-2, -1, 2, 1}, IntPoly{0, 0, 0, 8}, IntPoly{12, 0, 1}};
  for (const auto& h : polys)
    for (u64 q = 1; q <= 400; ++q) REQUIRE(roots_mod(h, q, no_check) == brute_roots(h, q));
  for (int i = 0; i < 60; ++i) {
    const IntPoly h = oracle::random_poly(rng, 4, 30);
    const u64 q = 1 + rng() % 3000;
    REQUIRE(roots_mod(h, q, no_check) == brute_roots(h, q));
  }
}

TEST_CASE("coprime_root_exists examples") {
  CHECK_FALSE(coprime_root_exists(IntPoly{0, 0, 1}, 2));
  for (u64 q = 1; q <= 200; ++q) REQUIRE(coprime_root_exists(kXsq1, q));
  CHECK(coprime_root_exists(kXsqX, 9));
}

TEST_CASE("unit p-adic roots") {
  CHECK(has_coprime_padic_root(kXsq1, 2));
  CHECK_FALSE(has_coprime_padic_root(IntPoly{0, 0, 1}, 3));
  CHECK_FALSE(has_coprime_padic_root(IntPoly{-2, 0, 1}, 2));  // x^2 = 2 has no 2-adic root
  CHECK_FALSE(has_coprime_padic_root(IntPoly{-2, 0, 1}, 5));
  CHECK(has_coprime_padic_root(IntPoly{-2, 0, 1}, 7));
  // x^2 - 17 has a 2-adic root (17 ≡ 1 mod 8) though the mod-2 root is singular.
  CHECK(has_coprime_padic_root(IntPoly{-17, 0, 1}, 2));
  CHECK_FALSE(has_coprime_padic_root(IntPoly{-5, 0, 1}, 2));
}

TEST_CASE("unit p-adic roots agree with deep brute force") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 80; ++i) {
    const IntPoly h = oracle::random_poly(rng, 3, 12);
    for (u64 p : {2, 3, 5}) {
      // p^8 is beyond the singular depth for these small coefficients.
      u64 q = 1;
      for (int j = 0; j < 8; ++j) q *= p;
      bool deep = false;
      for (u64 r : roots_mod(h, q))
        if (r % p != 0) deep = true;
      if (has_coprime_padic_root(h, p)) REQUIRE(deep);
    }
  }
}

TEST_CASE("certify examples") {
  const auto v1 = certify_P_intersective(kXsqX, 10000);
  CHECK(v1.kind == IntersectivityVerdict::Kind::SufficientCondition);
  const auto v2 = certify_P_intersective(IntPoly{0, 0, 1}, 10000);
  CHECK(v2.kind == IntersectivityVerdict::Kind::FailsAt);
  CHECK(v2.modulus == 2);
  // x^2 - 2 already fails mod 2 (its only root 0 is not a unit); mod 5 it has no root at all.
  const auto v3 = certify_P_intersective(IntPoly{-2, 0, 1}, 10000);
  CHECK(v3.kind == IntersectivityVerdict::Kind::FailsAt);
  CHECK(v3.modulus == 2);
  CHECK(roots_mod(IntPoly{-2, 0, 1}, 5).empty());
  CHECK(certify_P_intersective(IntPoly{-3, 0, 1}, 1000).modulus == 3);
  // (x^2-13)(x^2-17)(x^2-221): intersective without rational roots.
  const IntPoly classic = IntPoly{-13, 0, 1} * IntPoly{-17, 0, 1} * IntPoly{-221, 0, 1};
  const auto v4 = certify_P_intersective(classic, 2000);
  CHECK(v4.kind == IntersectivityVerdict::Kind::CertifiedUpTo);
  CHECK(v4.bound == 2000);
  CHECK_THROWS_AS(certify_P_intersective(IntPoly{5}, 100), std::invalid_argument);
}

TEST_CASE("FailsAt is an exact disproof") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const IntPoly h = oracle::random_poly(rng, 3, 20);
    const auto v = certify_P_intersective(h, 500);
    if (v.kind != IntersectivityVerdict::Kind::FailsAt) continue;
    for (u64 r : brute_roots(h, v.modulus)) REQUIRE(std::gcd(r, v.modulus) != 1);
  }
}

TEST_CASE("witness parameters") {
  const auto w1 = witness_set_params(IntPoly{0, 0, 1}, 2);
  CHECK(w1.m == 2);
  CHECK(w1.step == 6);
  const auto w2 = witness_set_params(IntPoly{0, 0, 1}, 4);
  CHECK(w2.m == 1);
  CHECK(w2.step == 8);
  const auto w3 = witness_set_params(IntPoly{9, -6, 1}, 3);
  CHECK(w3.m == 0);
  CHECK(w3.step == 3);
  CHECK_THROWS_AS(witness_set_params(kXsq1, 4), std::invalid_argument);
}

TEST_CASE("witness progression avoids every h(p)") {
  for (const auto& [h, q] : std::vector<std::pair<IntPoly, u64>>{{IntPoly{0, 0, 1}, 2}, {IntPoly{0, 0, 1}, 4},
                                                                   {IntPoly{-2, 0, 1}, 2}, {IntPoly{-3, 0, 1}, 3}}) {
    const u64 step = witness_set_params(h, q).step.get_ui();
    for (u64 p = 2; p < 1000; ++p) {
      if (!oracle::is_prime(p)) continue;
      const BigInt v = h(BigInt(static_cast<unsigned long>(p)));
      if (v > 0 && v <= 100000) REQUIRE(v.get_ui() % step != 0);
    }
  }
}

TEST_CASE("root selection") {
  const auto c5 = select_padic_root(kXsq1, 5);
  CHECK(c5.residue_mod_power(1) == 1);
  CHECK(c5.multiplicity == 1);
  const auto c2 = select_padic_root(kXsq1, 2);
  CHECK(c2.residue_mod_power(1) == 1);
  CHECK(c2.multiplicity == 1);
  CHECK(c2.depth == 3);
  for (u64 p : {2, 3, 5, 7, 11}) {
    const auto c = select_padic_root(IntPoly{1, -2, 1}, p);
    CHECK(c.multiplicity == 2);
    CHECK(c.residue_mod_power(1) == 1);
  }
  CHECK_THROWS_AS(select_padic_root(IntPoly{0, 0, 1}, 2), NoCoprimeRoot);
}

TEST_CASE("root selection certificates") {
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{1, -2, 1}, IntPoly{0, -1, 0, 1}, IntPoly{-2, -1, 2, 1}}) {
    for (u64 p : {2, 3, 5, 7, 13}) {
      const auto c = select_padic_root(h, p);
      CHECK(c.coprime);
      CHECK(c.lift % p != 0);
      // h(z) ≡ 0 mod p^precision.
      const BigInt mod = big_pow(p, static_cast<unsigned long>(c.precision));
      REQUIRE(h(c.lift) % mod == 0);
    }
  }
}

TEST_CASE("aux examples") {
  const RootBook book(kXsq1);
  const auto a1 = book.aux(1);
  CHECK(a1.r_d == 0);
  CHECK(a1.lambda_d == 1);
  CHECK(a1.h_d == kXsq1);
  const auto a2 = book.aux(2);
  CHECK(a2.r_d == -1);
  CHECK(a2.lambda_d == 2);
  CHECK(a2.h_d == IntPoly{0, -2, 2});
  const auto a5 = book.aux(5);
  CHECK(a5.r_d == -4);
  CHECK(a5.lambda_d == 5);
  CHECK(a5.h_d == IntPoly{3, -8, 5});
  CHECK(a5.b_d == 5);
}

TEST_CASE("aux invariants across d") {
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{1, -2, 1}, IntPoly{0, -1, 0, 1}, IntPoly{-2, -1, 2, 1}}) {
    const RootBook book(h);
    for (u64 d = 1; d <= 300; ++d) {
      const auto a = book.aux(d);
      const BigInt D = static_cast<unsigned long>(d);
      REQUIRE(a.r_d <= 0);
      REQUIRE(a.r_d > -D);
      REQUIRE(h(a.r_d) % D == 0);
      REQUIRE(gcd(a.r_d, D) == 1);
      REQUIRE(a.lambda_d * a.h_d == shift_scale(h, a.r_d, D));
    }
  }
}

TEST_CASE("scale identity h_qd λ(q) = h_d(m + qx)") {
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{1, -2, 1}, IntPoly{-2, -1, 2, 1}}) {
    const RootBook book(h);
    std::mt19937_64 rng(24);
    for (int i = 0; i < 60; ++i) {
      const u64 q = 1 + rng() % 20, d = 1 + rng() % 30;
      const auto ad = book.aux(d), aqd = book.aux(q * d);
      const BigInt m = (aqd.r_d - ad.r_d) / static_cast<unsigned long>(d);
      REQUIRE((aqd.r_d - ad.r_d) % static_cast<unsigned long>(d) == 0);
      REQUIRE(book.lambda(q) * aqd.h_d == shift_scale(ad.h_d, m, BigInt(static_cast<unsigned long>(q))));
    }
  }
}

TEST_CASE("h_range examples") {
  const RootBook book(kXsq1);
  const auto r1 = h_range(book.aux(1), 100, 10);
  CHECK(r1.H == std::vector<u64>{2, 3});
  CHECK(static_cast<double>(r1.M) == doctest::Approx(std::sqrt(10.0)));
  CHECK(r1.M_floor == 3);
  CHECK(r1.symdiff == 1);
  const auto r0 = h_range(book.aux(1), 10, 10);
  CHECK(r0.H.empty());
  CHECK(static_cast<double>(r0.M) == doctest::Approx(1.0));
  const auto r2 = h_range(book.aux(2), 400, 10);
  CHECK(r2.H == std::vector<u64>{2, 3, 4});
  CHECK(static_cast<double>(r2.M) == doctest::Approx(std::sqrt(20.0)));
}

TEST_CASE("h_range matches a scan") {
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{0, -1, 0, 1}}) {
    const RootBook book(h);
    for (u64 d : {1, 2, 3, 6, 10})
      for (u64 L : {50, 1000, 20000}) {
        const auto a = book.aux(d);
        const auto r = h_range(a, L, 10);
        std::vector<u64> expect;
        for (u64 x = 1; x < 10000; ++x) {
          const BigInt v = a.h_d(BigInt(static_cast<unsigned long>(x))) * 10;
          if (v > 0 && v < BigInt(static_cast<unsigned long>(L))) expect.push_back(x);
        }
        REQUIRE(r.H == expect);
      }
  }
}
