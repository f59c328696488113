#include <limits>

#include "doctest.h"
#include "pintersect/json_io.hpp"

using namespace pintersect;

TEST_CASE("scalars and polynomials round trip") {
  const BigInt huge("-123456789012345678901234567890");
  CHECK(json::parse_big(json::big(huge)) == huge);
  CHECK(json::parse_big(nlohmann::json(42)) == 42);
  CHECK_THROWS(json::parse_big(nlohmann::json("12x")));
  const BigRational r(7, 12);
  CHECK(json::parse_rational(json::rational(r)) == r);
  const IntPoly p{-1, 0, 1};
  CHECK(json::parse_poly(json::poly(p)) == p);
  CHECK(json::parse_poly_text(R"(["0","-1","1"])") == IntPoly{0, -1, 1});
  CHECK(json::parse_poly_text("[3, -8, 5]") == IntPoly{3, -8, 5});
  CHECK_THROWS(json::parse_poly_text("x^2"));
}

TEST_CASE("domain objects round trip") {
  const auto B = IndexSet::from_members(100, {1, 4, 9, 12});
  CHECK(json::parse_index_set(json::index_set(B)).members == B.members);

  const auto v = certify_P_intersective(IntPoly{0, 0, 1}, 100);
  const auto v2 = json::parse_verdict(json::verdict(v));
  CHECK(v2.kind == v.kind);
  CHECK(v2.modulus == v.modulus);
  CHECK(v2.roots == v.roots);

  const RootBook book(IntPoly{-1, 0, 1});
  const auto a = book.aux(5);
  const auto a2 = json::parse_aux(json::aux(a));
  CHECK(a2.h_d == a.h_d);
  CHECK(a2.r_d == a.r_d);
  CHECK(a2.lambda_d == a.lambda_d);
  CHECK(a2.b_d == a.b_d);

  const auto wp = weighted_primes(book.aux(1), 100, 10);
  CountOptions opts;
  opts.list_pairs = true;
  const auto rc = count_R_direct(B, book.aux(1), wp, opts);
  const auto rc2 = json::parse_r_count(json::r_count(rc));
  CHECK(rc2.value == rc.value);
  CHECK(rc2.weight == rc.weight);
  CHECK(rc2.terms.size() == rc.terms.size());
  CHECK(*rc2.pairs == *rc.pairs);
}

TEST_CASE("traces round trip") {
  IterationConfig cfg;
  cfg.c2 = 1;
  cfg.deficiency = std::numeric_limits<double>::infinity();
  IndexSet A{6000, {}};
  for (u64 x = 6; x <= 6000; x += 6) A.members.push_back(x);
  const auto t = run_iteration(A, IntPoly{0, -1, 1}, cfg);
  const auto j = json::trace(t);
  const auto back = json::parse_trace(j);
  CHECK(back.outcome == t.outcome);
  REQUIRE(back.steps.size() == t.steps.size());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    CHECK(back.steps[i].sigma_in == t.steps[i].sigma_in);
    CHECK(back.steps[i].sigma_out == t.steps[i].sigma_out);
    CHECK(back.steps[i].q == t.steps[i].q);
    CHECK(back.steps[i].threshold == t.steps[i].threshold);
  }
  CHECK(json::trace(back)["steps"] .size() == j["steps"].size());
  CHECK(back.start.delta == t.start.delta);
}
