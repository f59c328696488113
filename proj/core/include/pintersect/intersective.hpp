#pragma once

// p-adic roots, P-intersectivity certificates and the auxiliary polynomials h_d.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pintersect/arith.hpp"
#include "pintersect/polycore.hpp"

namespace pintersect {

struct RootsModOptions {
  /// Below this modulus the Hensel/CRT result is compared with brute force.
  u64 crosscheck_threshold = 10000;
};

/// {r mod q : q | h(r)}, sorted. Requires 1 <= q < 2^63.
std::vector<u64> roots_mod(const IntPoly& h, u64 q, const RootsModOptions& opts = {});

bool coprime_root_exists(const IntPoly& h, u64 q);

/// Exact per-prime decision: does h have a root in Z_p that is a unit?
bool has_coprime_padic_root(const IntPoly& h, u64 p);

struct IntersectivityVerdict {
  enum class Kind { CertifiedUpTo, FailsAt, SufficientCondition };
  Kind kind;
  u64 bound = 0;               // CertifiedUpTo
  u64 modulus = 0;             // FailsAt
  std::vector<u64> roots;      // FailsAt: every root mod `modulus` (none coprime)
  std::string condition;       // SufficientCondition
  std::string details;
};

std::string to_string(IntersectivityVerdict::Kind kind);

IntersectivityVerdict certify_P_intersective(const IntPoly& h, u64 q_max);

struct WitnessParams {
  u64 q;
  BigInt m;
  BigInt step;  // q(m+1)
};

/// Progression step whose multiples avoid every positive h(p). Requires that h
/// has no root mod q coprime to q.
WitnessParams witness_set_params(const IntPoly& h, u64 q);

struct PadicRootChoice {
  u64 prime = 0;
  BigInt residue;     // z mod p^depth
  int multiplicity = 0;
  int depth = 0;
  bool coprime = true;
  int t = 0;          // v_p(g'(z)) for the squarefree part g
  BigInt lift;        // z mod p^precision
  int precision = 0;

  /// z mod p^e; requires e <= precision.
  BigInt residue_mod_power(int e) const;
};

/// Smallest coprime p-adic root of h for each listed prime (ties broken by the
/// residue modulo the largest certification depth). Throws NoCoprimeRoot.
std::map<u64, PadicRootChoice> select_padic_roots(const IntPoly& h, const std::vector<u64>& primes);
PadicRootChoice select_padic_root(const IntPoly& h, u64 p);

struct AuxData {
  u64 d = 1;
  BigInt r_d;        // in (-d, 0]
  BigInt lambda_d;
  IntPoly h_d;
  BigInt b_d;        // leading coefficient of h_d
};

AuxData aux_data(const IntPoly& h, const std::map<u64, PadicRootChoice>& choices, u64 d);

/// λ(d) = Π p^{m_p v_p(d)}.
BigInt lambda_of(const std::map<u64, PadicRootChoice>& choices, u64 d);

struct HRange {
  std::vector<u64> H;       // sorted
  long double M = 0;        // (L / (s b_d))^{1/k}
  u64 M_floor = 0;          // ⌊M⌋, computed exactly
  std::size_t symdiff = 0;  // |[1, ⌊M⌋] △ H|
};

HRange h_range(const AuxData& aux, u64 L, u64 s);

/// Lazily selected root choices for one polynomial, shared across threads.
class RootBook {
 public:
  explicit RootBook(IntPoly h);

  const IntPoly& poly() const noexcept { return h_; }
  const PadicRootChoice& choice(u64 p) const;
  std::map<u64, PadicRootChoice> choices_for(u64 d) const;
  AuxData aux(u64 d) const;
  BigInt lambda(u64 d) const;

 private:
  IntPoly h_;
  mutable std::mutex mu_;
  mutable std::map<u64, std::unique_ptr<PadicRootChoice>> cache_;
};

}  // namespace pintersect
