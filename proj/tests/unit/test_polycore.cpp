#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pintersect/errors.hpp"
#include "pintersect/polycore.hpp"

using namespace pintersect;

TEST_CASE("eval examples") {
  CHECK(eval(IntPoly{-1, 0, 1}, 3) == 8);
  CHECK(eval(IntPoly{-1, 0, 1}, 1) == 0);
  CHECK(eval(IntPoly{3, -8, 5}, 2) == 7);
}

TEST_CASE("eval handles values beyond 64 bits") {
  const IntPoly p{0, 0, 0, 0, 0, 1};  // x^5
  const BigInt x("100000000000");     // 10^11
  CHECK(eval(p, x) == BigInt("10000000000000000000000000000000000000000000000000000000"));
}

TEST_CASE("eval agrees with the Horner oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> xs(-100000, 100000);
  for (int i = 0; i < 1000; ++i) {
    const IntPoly p = oracle::random_poly(rng, 6, 1000);
    const BigInt x = xs(rng);
    REQUIRE(eval(p, x) == oracle::horner(p, x));
  }
}

TEST_CASE("eval_mod agrees with exact evaluation") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const IntPoly p = oracle::random_poly(rng, 5, 1'000'000);
    const u64 m = 1 + rng() % 100000;
    const u64 x = rng() % 1'000'000;
    BigInt v = eval(p, BigInt(static_cast<unsigned long>(x))) % BigInt(static_cast<unsigned long>(m));
    if (v < 0) v += static_cast<unsigned long>(m);
    REQUIRE(p.eval_mod(x, m) == v.get_ui());
  }
}

TEST_CASE("polynomials are trimmed") {
  const IntPoly p(std::vector<BigInt>{1, 2, 0, 0});
  CHECK(p.degree() == 1);
  CHECK(p.lead() == 2);
  CHECK(IntPoly(std::vector<BigInt>{0, 0}).is_zero());
  CHECK(IntPoly{}.degree() == -1);
}

TEST_CASE("shift_scale examples") {
  CHECK(shift_scale(IntPoly{-1, 0, 1}, -1, 2) == IntPoly{0, -4, 4});
  CHECK(shift_scale(IntPoly{-1, 0, 1}, -4, 5) == IntPoly{15, -40, 25});
  const IntPoly p{7, -3, 0, 2};
  CHECK(shift_scale(p, 0, 1) == p);
}

TEST_CASE("shift_scale composition law") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> rs(-50, 50), ds(1, 30);
  for (int i = 0; i < 200; ++i) {
    const IntPoly p = oracle::random_poly(rng, 5, 100);
    const BigInt r1 = rs(rng), r2 = rs(rng), d1 = ds(rng), d2 = ds(rng);
    REQUIRE(shift_scale(shift_scale(p, r1, d1), r2, d2) == shift_scale(p, r1 + d1 * r2, d1 * d2));
  }
}

TEST_CASE("content examples and the constant term is excluded") {
  CHECK(content(IntPoly{-1, 0, 1}) == 1);
  CHECK(content(IntPoly{0, -2, 2}) == 2);
  CHECK(content(IntPoly{0, 9, 0, 6}) == 3);
  CHECK(content(IntPoly{5, 4, 6}) == 2);
  CHECK_THROWS_AS(content(IntPoly{7}), std::invalid_argument);
}

TEST_CASE("content is homogeneous") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<long> cs(-40, 40);
  for (int i = 0; i < 200; ++i) {
    const IntPoly p = oracle::random_poly(rng, 5, 60);
    long c = cs(rng);
    if (c == 0) c = 3;
    REQUIRE(content(BigInt(c) * p) == abs(BigInt(c)) * content(p));
  }
}

TEST_CASE("discriminant examples") {
  CHECK(discriminant_abs(IntPoly{-1, 0, 1}) == 4);
  CHECK(discriminant_abs(IntPoly{1, 1, 1}) == 3);
  CHECK(discriminant_abs(IntPoly{1, -2, 1}) == 0);
  CHECK_THROWS_AS(discriminant_abs(IntPoly{1, 1}), std::invalid_argument);
}

TEST_CASE("quadratic discriminant matches b^2 - 4ac") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<long> cs(-1000, 1000);
  for (int i = 0; i < 300; ++i) {
    const long a = cs(rng) | 1, b = cs(rng), c = cs(rng);
    REQUIRE(discriminant_abs(IntPoly{c, b, a}) == abs(BigInt(b) * b - BigInt(4) * a * c));
  }
}

TEST_CASE("cubic discriminant matches the closed form") {
  // x^3 + px + q: Δ = -4p^3 - 27q^2.
  for (long p = -6; p <= 6; ++p)
    for (long q = -6; q <= 6; ++q) {
      const BigInt expect = abs(BigInt(-4) * p * p * p - BigInt(27) * q * q);
      REQUIRE(discriminant_abs(IntPoly{q, p, 0, 1}) == expect);
    }
}

TEST_CASE("discriminant is invariant under translation") {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<long> rs(-100, 100);
  for (int i = 0; i < 100; ++i) {
    IntPoly p = oracle::random_poly(rng, 5, 50);
    if (p.degree() < 2) p = p * IntPoly{1, 1};
    const BigInt r = rs(rng);
    REQUIRE(discriminant_abs(shift_scale(p, r, 1)) == discriminant_abs(p));
  }
}

TEST_CASE("resultant of linear factors") {
  // Res(x - a, x - b) = a - b up to sign.
  CHECK(abs(resultant(IntPoly{-3, 1}, IntPoly{-7, 1})) == 4);
  CHECK(resultant(IntPoly{-1, 0, 1}, IntPoly{5}) == 25);
}

TEST_CASE("divide_exact") {
  CHECK(divide_exact(IntPoly{0, -4, 4}, 2) == IntPoly{0, -2, 2});
  CHECK_THROWS_AS(divide_exact(IntPoly{1, -4, 4}, 2), InexactDivision);
}

TEST_CASE("squarefree decomposition") {
  const auto dec = squarefree_decomposition(IntPoly{1, -2, 1});
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].factor == IntPoly{-1, 1});
  CHECK(dec[0].multiplicity == 2);
  // (x-1)^2 (x+2)^3 x
  const IntPoly p = IntPoly{-1, 1} * IntPoly{-1, 1} * IntPoly{2, 1} * IntPoly{2, 1} * IntPoly{2, 1} * IntPoly{0, 1};
  int total = 0;
  for (const auto& f : squarefree_decomposition(p)) total += f.factor.degree() * f.multiplicity;
  CHECK(total == 6);
  CHECK(squarefree_part(p).degree() == 3);
}

TEST_CASE("weighted discriminant") {
  CHECK(weighted_discriminant_abs(IntPoly{1, -2, 1}) == 1);
  CHECK(weighted_discriminant_abs(IntPoly{-1, 0, 1}) == 4);
  CHECK(weighted_discriminant_abs(IntPoly{0, -1, 0, 1}) == 4);
  // Agrees with |Res(p,p')/a| for squarefree p.
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    IntPoly p = oracle::random_poly(rng, 4, 20);
    if (p.degree() < 2) continue;
    const BigInt d = discriminant_abs(p);
    if (d == 0) continue;
    REQUIRE(weighted_discriminant_abs(p) == BigRational(d));
  }
}

TEST_CASE("to_string") {
  CHECK(IntPoly{3, -8, 5}.to_string() == "5x^2 - 8x + 3");
  CHECK(IntPoly{-1, 0, 1}.to_string() == "x^2 - 1");
}
