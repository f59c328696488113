#pragma once

// Transforms on Z, weighted Weyl sums, Gauss sums, arcs and moment sums.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pintersect/arith.hpp"
#include "pintersect/counting.hpp"
#include "pintersect/intersective.hpp"
#include "pintersect/primes.hpp"

namespace pintersect {

using Complex = std::complex<double>;

/// α = a/q + β (mod 1). The rational part is handled with integer residues;
/// β is carried as a 128-bit fixed-point fraction so that h·β is reduced
/// exactly before any floating-point rounding.
class Frequency {
 public:
  static Frequency rational(i64 a, u64 q);
  static Frequency real(double alpha);
  static Frequency shifted(i64 a, u64 q, double beta);
  /// "a/q", "a/q+beta" or a decimal.
  static Frequency parse(const std::string& text);

  i64 a() const noexcept { return a_; }
  u64 q() const noexcept { return q_; }
  double beta() const noexcept { return beta_; }
  double approx() const;

  /// Fractional part of n·α in units of 2^-64.
  u64 phase(const BigInt& n) const;
  u64 phase(i64 n) const;

 private:
  i64 a_ = 0;
  u64 q_ = 1;
  double beta_ = 0;
  u128 beta_fixed_ = 0;
};

/// e(phase / 2^64).
Complex unit_from_phase(u64 phase);

using SparseFunction = std::vector<std::pair<i64, double>>;

/// F̂(α) = Σ F(x) e^{-2πixα}.
Complex transform_at(const SparseFunction& F, double alpha);
Complex transform_at(const SparseFunction& F, const Frequency& alpha);
/// F̂(t/T) for t in [0, T), via FFT.
std::vector<Complex> transform_grid(const SparseFunction& F, u64 T);

/// f_B = 1_B − σ 1_[1,L].
SparseFunction balance_function(const IndexSet& B);

/// S_X(α) = Σ_{x=1}^X ν_d(x) e(h_d(x) α).
Complex weyl_sum(const AuxData& aux, const WeightedPrimes& wp, u64 X, const Frequency& alpha);

/// G(a, q) = Σ_{0<=ℓ<q, gcd(r_d + dℓ, q) = 1} e(h_d(ℓ) a / q).
Complex gauss_sum(const AuxData& aux, i64 a, u64 q);
/// G(a, q) for every a in [0, q), by histogram + FFT.
std::vector<Complex> gauss_sums_all(const AuxData& aux, u64 q);

Complex twisted_gauss_sum_direct(const IntPoly& g, i64 W, i64 b, i64 a, u64 q);
/// Same sum via the CRT splitting over prime powers and, for p ∤ W, the
/// reduction to the complete sum of g̃(r) = (g(pr + m) − g(m)) / p.
Complex twisted_gauss_sum_split(const IntPoly& g, i64 W, i64 b, i64 a, u64 q);
/// Σ_{ℓ<q} e(g(ℓ) a / q).
Complex complete_sum(const IntPoly& g, i64 a, u64 q);

struct GaussRatio {
  double ratio = 0;  // max_a |G(a,q)| / q^{1 - 1/k}
  u64 argmax_a = 0;
};
GaussRatio gauss_bound_ratio(const AuxData& aux, u64 q);

/// max_a |Σ_ℓ e(g(ℓ)a/q)| / (gcd(cont g, q)^{1/k} q^{1-1/k}).
double complete_sum_ratio(const IntPoly& g, u64 q);

struct MajorArc {
  u64 q;
  u64 a;
};

struct ArcSystem {
  u64 L = 0;
  double eta = 0;
  double gamma = 0;
  u64 Q = 0;            // ⌊η^{-γ}⌋
  double radius = 0;    // 1 / (η^γ L)
  std::vector<MajorArc> majors;

  bool in_major(double alpha) const;
};

/// Throws ArcSystemTooLarge when Σ_{q<=Q} φ(q) would exceed max_arcs.
ArcSystem make_arcs(u64 L, double eta, double gamma, std::size_t max_arcs = 200'000);

/// 2^⌈log2 4L⌉.
u64 default_grid(u64 L);

struct L2Report {
  u64 grid = 0;
  std::map<u64, double> mass_by_q;  // ∫_{M_q} |f̂_B|^2 (Riemann sum)
  double major_mass = 0;            // over the union of all major arcs
  double minor_mass = 0;
  double plancherel_mass = 0;       // Σ_t |f̂(t/T)|^2 / T
  double direct_mass = 0;           // Σ_x f_B(x)^2
};

L2Report l2_concentration(const IndexSet& B, const ArcSystem& arcs, u64 grid);

struct ExceptionalData {
  u64 q0 = 1;
  double rho = 0.5;
  std::vector<Complex> chi;  // χ(n mod q0)
};

struct OscillatoryIntegral {
  Complex value;
  double error_estimate = 0;
  long evaluations = 0;
};

/// ∫_lo^hi w(x) e(h_d(x) β) dx with w = 1, or w(x) = 1 − χ(r_d)(dx)^{ρ−1} when
/// exceptional data is supplied. Panels follow the phase and split at the
/// stationary points of h_d.
OscillatoryIntegral oscillatory_integral(const AuxData& aux, double beta, double lo, double hi,
                                         const ExceptionalData* exc = nullptr, int panel_scale = 1);

struct MainTerm {
  Complex value;
  Complex gauss;
  Complex integral;
  double phi_ratio = 0;  // φ(d)/φ(qd)
};

MainTerm main_term_asym2(const AuxData& aux, i64 a, u64 q, double beta, double M,
                         const ExceptionalData* exc = nullptr);

/// |S_⌊M⌋(a/q + β) − main term|.
double main_term_residual(const AuxData& aux, const WeightedPrimes& wp, i64 a, u64 q, double beta,
                          const ExceptionalData* exc = nullptr);

enum class MomentKind { T, W };

struct MomentResult {
  double value = 0;  // Σ_t |T(t/N)|^s
  Complex at_zero;   // T(0)
  u64 N = 0;
  double parseval_lhs = 0;  // (1/N) Σ_t |T(t/N)|^2
  double parseval_rhs = 0;  // Σ_x weight(x)^2
};

/// N = 0 picks the smallest power of two >= 2 max h_d(H_d).
MomentResult moment_sum(const AuxData& aux, const WeightedPrimes& wp, MomentKind kind, unsigned s, u64 N = 0);

struct OrthogonalityCheck {
  double fourier_side = 0;  // (1/T) Σ_t |f̂(t/T)|^2 S(t/T), S over H_d
  double direct_side = 0;   // Σ_{x, y∈H} f(x) f(x + h_d(y)) ν(y)
  double imag_residue = 0;
  u64 T = 0;
};

OrthogonalityCheck orthogonality_identity(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp, u64 T = 0);

}  // namespace pintersect
