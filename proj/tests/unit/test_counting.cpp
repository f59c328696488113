#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "pintersect/counting.hpp"
#include "pintersect/errors.hpp"

using namespace pintersect;

namespace {

const IntPoly kXsq1{-1, 0, 1};
const IntPoly kXsqX{0, -1, 1};

// Brute force Σ_{x∈B, y∈H} 1_B(x + h_d(y)) ν(y).
double brute_R(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp) {
  const std::set<u64> in(B.members.begin(), B.members.end());
  double total = 0;
  for (u64 y : wp.H) {
    if (wp.nu[y] == 0) continue;
    const u64 g = aux.h_d(BigInt(static_cast<unsigned long>(y))).get_ui();
    for (u64 x : B.members)
      if (in.count(x + g)) total += wp.nu[y];
  }
  return total;
}

}  // namespace

TEST_CASE("IndexSet basics") {
  const auto B = IndexSet::from_members(10, {9, 1, 4, 4});
  CHECK(B.members == std::vector<u64>{1, 4, 9});
  CHECK(B.sigma() == BigRational(3, 10));
  CHECK_THROWS(IndexSet::from_members(10, {11}));
  CHECK_THROWS(IndexSet::from_members(10, {0}));
  CHECK(IndexSet::full(5).size() == 5);
}

TEST_CASE("R examples") {
  const RootBook book(kXsq1);
  const auto a = book.aux(1);
  const auto wp = weighted_primes(a, 100, 10);
  const auto B = IndexSet::from_members(100, {1, 4, 9, 12});
  const double expect = 2 * std::log(2.0) + 2 * std::log(3.0);
  CHECK(std::fabs(count_R_direct(B, a, wp).value - expect) < 1e-9);
  CHECK(std::fabs(count_R_fft(B, a, wp).value - expect) < 1e-9);
  CHECK(expect == doctest::Approx(3.5835).epsilon(1e-4));

  const IndexSet empty{100, {}};
  CHECK(count_R_direct(empty, a, wp).value == 0);
  CHECK(count_R_fft(empty, a, wp).value == 0);

  const double full = 97 * std::log(2.0) + 92 * std::log(3.0);
  CHECK(count_R_direct(IndexSet::full(100), a, wp).value == doctest::Approx(full).epsilon(1e-12));
  CHECK(count_R_fft(IndexSet::full(100), a, wp).value == doctest::Approx(full).epsilon(1e-9));
  CHECK(full == doctest::Approx(168.32).epsilon(1e-4));
}

TEST_CASE("pair listing") {
  const RootBook book(kXsq1);
  const auto a = book.aux(1);
  const auto wp = weighted_primes(a, 100, 10);
  const auto B = IndexSet::from_members(100, {1, 4, 9, 12});
  CountOptions opts;
  opts.list_pairs = true;
  const auto r = count_R_direct(B, a, wp, opts);
  REQUIRE(r.pairs);
  CHECK(r.pairs->size() == 4);
  for (const auto& [x, y] : *r.pairs) {
    const u64 g = a.h_d(BigInt(static_cast<unsigned long>(y))).get_ui();
    CHECK(std::binary_search(B.members.begin(), B.members.end(), x + g));
  }
}

TEST_CASE("fft agrees with direct and brute force") {
  std::mt19937_64 rng(31);
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{0, -1, 0, 1}}) {
    const RootBook book(h);
    for (int i = 0; i < 25; ++i) {
      const u64 L = 50 + rng() % 20000;
      const u64 d = 1 + rng() % 10;
      const double density = 0.05 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0;
      const auto B = oracle::random_set(L, density, rng);
      const auto a = book.aux(d);
      const auto wp = weighted_primes(a, L, 10);
      const double direct = count_R_direct(B, a, wp).value;
      const double fft = count_R_fft(B, a, wp).value;
      REQUIRE(direct == doctest::Approx(brute_R(B, a, wp)).epsilon(1e-12));
      REQUIRE(std::fabs(fft - direct) <= 1e-6 * std::max(1.0, direct));
    }
  }
}

TEST_CASE("fft on a progression and a sparse large set") {
  const RootBook book(kXsq1);
  const auto a = book.aux(3);
  const u64 L = 100000;
  const auto wp = weighted_primes(a, L, 10);
  std::vector<u64> ap;
  for (u64 x = 7; x <= L; x += 7) ap.push_back(x);
  const auto B = IndexSet::from_members(L, ap);
  CHECK(count_R_fft(B, a, wp).value == doctest::Approx(count_R_direct(B, a, wp).value).epsilon(1e-6));

  std::mt19937_64 rng(32);
  const auto S = oracle::random_set(L, 0.005, rng);
  CHECK(count_R_fft(S, a, wp).value == doctest::Approx(count_R_direct(S, a, wp).value).epsilon(1e-6));
}

TEST_CASE("R is monotone under inclusion") {
  std::mt19937_64 rng(33);
  const RootBook book(kXsqX);
  for (int i = 0; i < 30; ++i) {
    const u64 L = 200 + rng() % 5000;
    const auto big_set = oracle::random_set(L, 0.5, rng);
    std::vector<u64> sub;
    for (u64 x : big_set.members)
      if (rng() % 3 != 0) sub.push_back(x);
    const auto small = IndexSet::from_members(L, sub);
    const auto a = book.aux(1 + rng() % 6);
    const auto wp = weighted_primes(a, L, 10);
    const auto rs = count_R_direct(small, a, wp), rb = count_R_direct(big_set, a, wp);
    REQUIRE(rs.value <= rb.value);
    REQUIRE(r_dominated(rs, rb));
  }
}

TEST_CASE("extraction examples") {
  std::vector<u64> evens;
  for (u64 x = 2; x <= 100; x += 2) evens.push_back(x);
  const auto E = IndexSet::from_members(100, evens);
  CHECK(extract_subprogression(E, 0, 2, 50).members == IndexSet::full(50).members);

  const auto B = IndexSet::from_members(100, {1, 4, 9, 12});
  CHECK(extract_subprogression(B, 1, 3, 4).members == std::vector<u64>{1});
  CHECK(extract_subprogression(B, 1000, 3, 4).members.empty());
  CHECK_THROWS(extract_subprogression(B, 0, 3, 40));
}

TEST_CASE("scale inheritance holds exactly on random extractions") {
  std::mt19937_64 rng(34);
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{0, -1, 0, 1}}) {
    const RootBook book(h);
    for (int i = 0; i < 40; ++i) {
      const u64 L = 500 + rng() % 9500;
      const u64 d = 1 + rng() % 10, q = 1 + rng() % 10;
      const u64 lam = book.lambda(q).get_ui();
      const u64 L_new = std::max<u64>(1, L / lam - rng() % std::max<u64>(1, L / lam / 2));
      const auto B = oracle::random_set(L, 0.3 + 0.6 * static_cast<double>(rng() % 100) / 100.0, rng);
      // x0 = d-progression offset: the new progression must sit inside the old one's structure.
      const i64 x0 = static_cast<i64>(rng() % lam) - 1;
      const auto Bp = extract_subprogression(B, x0, lam, L_new);
      const auto ad = book.aux(d), aqd = book.aux(q * d);
      const auto before = count_R_direct(B, ad, weighted_primes(ad, L, 10));
      const auto after = count_R_direct(Bp, aqd, weighted_primes(aqd, L_new < 10 ? 10 : L_new, 10));
      REQUIRE(after.value <= before.value + 1e-9 * before.value);
      REQUIRE(r_dominated(after, before));
    }
  }
}

TEST_CASE("greedy example at N = 10") {
  const auto G = greedy_avoider(kXsq1, 10, GapMode::Primes);
  CHECK(G.members == std::vector<u64>{1, 2, 3, 7, 8});
  CHECK(forbidden_gaps(kXsq1, 10, GapMode::Primes) == std::vector<u64>{3, 8});
  CHECK(greedy_avoider(kXsq1, 1, GapMode::Primes).members == std::vector<u64>{1});
}

TEST_CASE("greedy sets avoid every forbidden gap") {
  for (const IntPoly& h : {kXsq1, kXsqX, IntPoly{0, 0, 1}})
    for (GapMode mode : {GapMode::Primes, GapMode::AllN}) {
      const u64 N = 3000;
      const auto G = greedy_avoider(h, N, mode);
      std::set<u64> gaps;
      for (u64 n = 1; n <= N; ++n) {
        if (mode == GapMode::Primes && !oracle::is_prime(n)) continue;
        const BigInt v = h(BigInt(static_cast<unsigned long>(n)));
        if (v > 0 && v <= N) gaps.insert(v.get_ui());
      }
      CHECK(forbidden_gaps(h, N, mode) == std::vector<u64>(gaps.begin(), gaps.end()));
      for (std::size_t i = 0; i < G.members.size(); ++i)
        for (std::size_t j = i + 1; j < G.members.size(); ++j) REQUIRE(gaps.count(G.members[j] - G.members[i]) == 0);
    }
}

TEST_CASE("witness progression for x^2 is admissible") {
  const auto w = witness_set_params(IntPoly{0, 0, 1}, 2);
  const u64 step = w.step.get_ui();
  const auto gaps = forbidden_gaps(IntPoly{0, 0, 1}, 100000, GapMode::Primes);
  for (u64 g : gaps) REQUIRE(g % step != 0);
}

TEST_CASE("density profile") {
  const std::vector<u64> Ns{1000, 2000, 4000, 8000, 16000, 32000, 64000};
  const auto primes = density_profile(kXsq1, Ns, GapMode::Primes);
  const auto all = density_profile(kXsq1, Ns, GapMode::AllN);
  REQUIRE(primes.size() == Ns.size());
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    CHECK(primes[i].N == Ns[i]);
    CHECK(primes[i].density >= all[i].density);
    CHECK(primes[i].set_size == greedy_avoider(kXsq1, Ns[i], GapMode::Primes).size());
    if (i > 0) CHECK(primes[i].density <= primes[i - 1].density);
  }
  CHECK(parse_gap_mode(to_string(GapMode::AllN)) == GapMode::AllN);
}
