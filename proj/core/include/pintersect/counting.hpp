#pragma once

// R_d(B), subprogression extraction, and greedy sets avoiding the differences h(p).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pintersect/arith.hpp"
#include "pintersect/intersective.hpp"
#include "pintersect/primes.hpp"

namespace pintersect {

/// A subset of [1, L].
struct IndexSet {
  u64 L = 0;
  std::vector<u64> members;  // sorted, distinct, within [1, L]

  static IndexSet from_members(u64 L, std::vector<u64> members);
  static IndexSet full(u64 L);

  std::size_t size() const noexcept { return members.size(); }
  BigRational sigma() const;
  double density() const;
  /// 1_B on [0, L + 1].
  std::vector<std::uint8_t> indicator() const;
};

struct RTerm {
  u64 y;
  u64 prime;  // r_d + d y
  u64 pairs;  // #{x ∈ B : x + h_d(y) ∈ B}
};

struct RCount {
  double value = 0;
  std::vector<RTerm> terms;  // one per y ∈ H_d ∩ Λ_d, ascending y
  BigRational weight;        // φ(d)/d
  std::optional<std::vector<std::pair<u64, u64>>> pairs;  // (x, y)
};

struct CountOptions {
  bool list_pairs = false;
  std::size_t pair_cap = 1'000'000;
};

RCount count_R_direct(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp, const CountOptions& opts = {});
RCount count_R_fft(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp);

/// Exact certificate for small <= large: every prime term of `small` is
/// matched by the same prime in `large` with at least as many pairs, and the
/// weight φ(d)/d does not increase. Pairs produced by extract_subprogression always satisfy this.
bool r_dominated(const RCount& small, const RCount& large);

/// {ℓ ∈ [1, L_new] : x0 + ℓ λ ∈ B}. Requires L_new <= B.L / λ.
IndexSet extract_subprogression(const IndexSet& B, i64 x0, u64 lambda_q, u64 L_new);

enum class GapMode { Primes, AllN };
std::string to_string(GapMode mode);
GapMode parse_gap_mode(const std::string& s);

/// Sorted positive values h(p) (p prime) or h(n) (n >= 1) that are <= bound.
std::vector<u64> forbidden_gaps(const IntPoly& h, u64 bound, GapMode mode);

/// Left-to-right greedy subset of [1, N] with no two members differing by a forbidden gap.
IndexSet greedy_avoider(const IntPoly& h, u64 N, GapMode mode);

struct ProfileRow {
  u64 N;
  double density;
  u64 set_size;
};

/// Greedy densities at each N; runs once at max N and reads prefix counts,
/// since the greedy set for N is the prefix of the set for any larger N.
std::vector<ProfileRow> density_profile(const IntPoly& h, const std::vector<u64>& Ns, GapMode mode);

}  // namespace pintersect
