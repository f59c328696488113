#include "pintersect/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fft.hpp"
#include "pintersect/errors.hpp"

namespace pintersect {

namespace {

void check_compatible(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp) {
  if (wp.d != aux.d) throw std::invalid_argument("R count: weights built for a different d");
  if (wp.L != B.L) throw std::invalid_argument("R count: weights built for a different L");
}

// Gap h_d(y) for every y ∈ H_d carrying a prime.
std::vector<std::pair<u64, u64>> weighted_lags(const AuxData& aux, const WeightedPrimes& wp) {
  std::vector<std::pair<u64, u64>> out;  // (y, h_d(y))
  for (u64 y : wp.H) {
    if (!wp.in_lambda(y)) continue;
    const BigInt g = aux.h_d(BigInt(static_cast<unsigned long>(y)));
    out.emplace_back(y, g.get_ui());
  }
  return out;
}

u64 prime_of(const AuxData& aux, u64 y) {
  return static_cast<u64>(aux.r_d.get_si() + static_cast<i64>(aux.d * y));
}

double kahan_value(const std::vector<RTerm>& terms, const WeightedPrimes& wp) {
  double sum = 0, comp = 0;
  for (const auto& t : terms) {
    const double term = static_cast<double>(t.pairs) * wp.nu[t.y] - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

BigInt cauchy_bound(const IntPoly& p) {
  BigInt mx = 0;
  for (int i = 0; i < p.degree(); ++i) mx = std::max(mx, BigInt(abs(p.coeff(i))));
  return 1 + (mx + abs(p.lead()) - 1) / abs(p.lead());
}

}  // namespace

IndexSet IndexSet::from_members(u64 L, std::vector<u64> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && (members.front() < 1 || members.back() > L))
    throw std::invalid_argument("IndexSet: members must lie in [1, L]");
  return IndexSet{L, std::move(members)};
}

IndexSet IndexSet::full(u64 L) {
  IndexSet B{L, {}};
  B.members.resize(L);
  for (u64 i = 0; i < L; ++i) B.members[i] = i + 1;
  return B;
}

BigRational IndexSet::sigma() const {
  if (L == 0) throw std::invalid_argument("IndexSet: L must be positive");
  BigRational r(BigInt(static_cast<unsigned long>(members.size())), BigInt(static_cast<unsigned long>(L)));
  r.canonicalize();
  return r;
}

double IndexSet::density() const { return L == 0 ? 0.0 : static_cast<double>(members.size()) / static_cast<double>(L); }

std::vector<std::uint8_t> IndexSet::indicator() const {
  std::vector<std::uint8_t> bits(L + 2, 0);
  for (u64 x : members) bits[x] = 1;
  return bits;
}

RCount count_R_direct(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp, const CountOptions& opts) {
  check_compatible(B, aux, wp);
  const auto bits = B.indicator();
  RCount out;
  out.weight = wp.weight;
  if (opts.list_pairs) out.pairs.emplace();
  for (const auto& [y, g] : weighted_lags(aux, wp)) {
    u64 pairs = 0;
    for (u64 x : B.members) {
      if (x + g > B.L) break;
      if (bits[x + g]) {
        ++pairs;
        if (out.pairs && out.pairs->size() < opts.pair_cap) out.pairs->emplace_back(x, y);
      }
    }
    out.terms.push_back({y, prime_of(aux, y), pairs});
  }
  out.value = kahan_value(out.terms, wp);
  return out;
}

RCount count_R_fft(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp) {
  check_compatible(B, aux, wp);
  RCount out;
  out.weight = wp.weight;
  const auto lags = weighted_lags(aux, wp);
  if (B.members.empty() || lags.empty()) {
    for (const auto& [y, g] : lags) out.terms.push_back({y, prime_of(aux, y), 0});
    out.value = 0;
    return out;
  }
  std::size_t n = 1;
  while (n < 2 * (B.L + 1)) n <<= 1;
  std::vector<double> a(B.L + 1, 0.0);
  for (u64 x : B.members) a[x] = 1.0;
  const auto corr = detail::autocorrelation(a, n);
  for (const auto& [y, g] : lags) {
    u64 pairs = 0;
    if (g < n) {
      const double c = corr[g];
      const double r = std::nearbyint(c);
      if (std::fabs(c - r) > 0.25) throw InternalError("count_R_fft: correlation is not near an integer");
      pairs = static_cast<u64>(std::max(0.0, r));
    }
    out.terms.push_back({y, prime_of(aux, y), pairs});
  }
  out.value = kahan_value(out.terms, wp);
  return out;
}

bool r_dominated(const RCount& small, const RCount& large) {
  if (small.weight > large.weight) {
    for (const auto& t : small.terms)
      if (t.pairs > 0) return false;
    return true;
  }
  std::map<u64, u64> by_prime;
  for (const auto& t : large.terms) by_prime[t.prime] += t.pairs;
  for (const auto& t : small.terms) {
    if (t.pairs == 0) continue;
    auto it = by_prime.find(t.prime);
    if (it == by_prime.end() || it->second < t.pairs) return false;
  }
  return true;
}

IndexSet extract_subprogression(const IndexSet& B, i64 x0, u64 lambda_q, u64 L_new) {
  if (lambda_q == 0) throw std::invalid_argument("extract_subprogression: lambda must be positive");
  if (L_new == 0 || L_new > B.L / lambda_q)
    throw std::invalid_argument("extract_subprogression: requires 1 <= L_new <= L / lambda");
  IndexSet out{L_new, {}};
  const i64 lam = static_cast<i64>(lambda_q);
  for (u64 m : B.members) {
    const i64 diff = static_cast<i64>(m) - x0;
    if (diff <= 0 || diff % lam != 0) continue;
    const u64 ell = static_cast<u64>(diff / lam);
    if (ell > L_new) break;
    out.members.push_back(ell);
  }
  return out;
}

std::string to_string(GapMode mode) { return mode == GapMode::Primes ? "primes" : "all-n"; }

GapMode parse_gap_mode(const std::string& s) {
  if (s == "primes") return GapMode::Primes;
  if (s == "all-n" || s == "all") return GapMode::AllN;
  throw std::invalid_argument("unknown gap mode '" + s + "' (expected primes or all-n)");
}

std::vector<u64> forbidden_gaps(const IntPoly& h, u64 bound, GapMode mode) {
  if (h.degree() < 1) throw std::invalid_argument("forbidden_gaps: degree must be >= 1");
  // Past the Cauchy bounds of h and h', h is monotone with the sign of its lead.
  BigInt c = cauchy_bound(h);
  if (h.degree() >= 2) c = std::max(c, cauchy_bound(h.derivative()));
  const BigInt bb = static_cast<unsigned long>(bound);
  u64 n_end = c.get_ui();
  if (h.lead() > 0)
    while (h(BigInt(static_cast<unsigned long>(n_end))) <= bb) ++n_end;

  std::vector<u64> out;
  auto consider = [&](u64 n) {
    const BigInt v = h(BigInt(static_cast<unsigned long>(n)));
    if (v > 0 && v <= bb) out.push_back(v.get_ui());
  };
  if (mode == GapMode::AllN) {
    for (u64 n = 1; n <= n_end; ++n) consider(n);
  } else {
    const auto table = shared_primes(std::max<u64>(n_end, 2));
    for (u64 p : table->primes()) {
      if (p > n_end) break;
      consider(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexSet greedy_avoider(const IntPoly& h, u64 N, GapMode mode) {
  if (N == 0) throw std::invalid_argument("greedy_avoider: N must be positive");
  const auto gaps = forbidden_gaps(h, N, mode);
  std::vector<std::uint8_t> blocked(N + 1, 0);
  IndexSet out{N, {}};
  for (u64 x = 1; x <= N; ++x) {
    if (blocked[x]) continue;
    out.members.push_back(x);
    for (u64 g : gaps) {
      if (x + g > N) break;
      blocked[x + g] = 1;
    }
  }
  return out;
}

std::vector<ProfileRow> density_profile(const IntPoly& h, const std::vector<u64>& Ns, GapMode mode) {
  if (Ns.empty()) return {};
  const u64 n_max = *std::max_element(Ns.begin(), Ns.end());
  const IndexSet full = greedy_avoider(h, n_max, mode);
  std::vector<ProfileRow> rows;
  rows.reserve(Ns.size());
  for (u64 N : Ns) {
    if (N == 0) throw std::invalid_argument("density_profile: N must be positive");
    const auto count = static_cast<u64>(std::upper_bound(full.members.begin(), full.members.end(), N) -
                                        full.members.begin());
    rows.push_back({N, static_cast<double>(count) / static_cast<double>(N), count});
  }
  return rows;
}

}  // namespace pintersect
