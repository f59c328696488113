#pragma once

// Density-increment iteration: edge intervals, L² concentration on major arcs,
// progression extraction, and the driver that records a trace.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pintersect/arith.hpp"
#include "pintersect/counting.hpp"
#include "pintersect/fourier.hpp"
#include "pintersect/intersective.hpp"

namespace pintersect {

struct IterationConfig {
  double epsilon = 0.5;     // γ = k + ε/2
  double c2 = 1.0 / 64;     // η = c2 σ
  double deficiency = 1.0 / 8;  // structure gate R > deficiency σ² L Ψ; +inf disables it
  double ceiling = 0.9;     // stop once σ exceeds this
  std::optional<u64> floor;   // default ⌈√N⌉
  std::optional<u64> budget;  // default ⌈C δ^{-(γ-1)}⌉
  double budget_C = 1.0;
  u64 q0 = 1;
  u64 d0 = 1;
  std::optional<u64> s;     // default 2^k + 6
  std::size_t max_arcs = 2'000'000;
};

double gamma_of(const IntPoly& h, const IterationConfig& cfg);
u64 s_param(const IntPoly& h, const IterationConfig& cfg);
u64 default_budget(double delta, double gamma, double C);

struct EdgeInterval {
  u64 start = 0;  // interval [start, start + length - 1]
  u64 length = 0;
  u64 count = 0;
  bool left = true;
};

/// When |B ∩ (L/9, 8L/9)| < 3σL/4, the end interval of B-density >= 9σ/8
/// (denser one, ties to the left), compared exactly. Otherwise nullopt; also
/// nullopt if integer rounding leaves neither end interval at 9σ/8.
std::optional<EdgeInterval> edge_case_check(const IndexSet& B);

struct Progression {
  i64 x0 = 0;     // members x0 + ℓ λ for 1 <= ℓ <= length
  u64 lambda = 1;
  u64 length = 0;
  u64 count = 0;  // |B ∩ P|
};

struct ConcentrationResult {
  u64 q = 1;
  u64 lambda_q = 1;
  double arc_mass = 0;
  double omega = 0;        // arc mass / (σ² L)
  double eta = 0;
  u64 Q = 0;
  u64 L_target = 0;        // ⌊min(η^γ, ωσ) L / λ(q)⌋ clamped to [1, L/λ(q)]
  Progression best;
  double plancherel_mass = 0;
  double major_mass = 0;
};

/// Throws NoIncrement if no block of the partition beats σ, and
/// ArcSystemTooLarge if the arcs exceed cfg.max_arcs.
ConcentrationResult concentration_step(const IndexSet& B, const RootBook& book, const IterationConfig& cfg);

/// Densest block (ties leftmost) when each class mod λ is cut into balanced
/// consecutive blocks of length at most L_target.
Progression densest_block(const IndexSet& B, u64 lambda, u64 L_target);

struct StructureGate {
  RCount R;
  double threshold = 0;
  double psi = 0;
  WeightedPrimes wp;
  bool structure_found() const { return R.value > threshold; }
};

StructureGate evaluate_gate(const IndexSet& B, const RootBook& book, u64 d, const IterationConfig& cfg);

struct IncrementStep {
  std::string branch;  // "structure", "edge-interval", "concentration", "pigeonhole"
  BigRational sigma_in, sigma_out;
  u64 L_in = 0, L_out = 0;
  u64 d_in = 1, d_out = 1;
  u64 q = 1;
  u64 lambda_q = 1;
  i64 x0 = 0;
  double r_before = 0, r_after = 0;
  double threshold = 0;
  double omega = 0;           // concentration only
  double increment_target = 0;    // σ + ωσ/4, recorded only
  IndexSet B_out;
};

/// One step from (B, d). Returns a "structure" step when the gate fires.
IncrementStep increment_once(const IndexSet& B, u64 d, const RootBook& book, const IterationConfig& cfg,
                             u64 floor_L);

enum class Outcome {
  StructureFound,
  DensitySaturated,
  StepBudgetExhausted,
  LengthFloorReached,
  NoIncrement,
  ArcSystemTooLarge,
  PsiVanishes,
};

std::string to_string(Outcome o);
Outcome parse_outcome(const std::string& s);

struct IterationStart {
  u64 N = 0;
  u64 size = 0;
  BigRational delta;
  u64 d0 = 1;
  u64 q0 = 1;
  u64 s = 0;
  double gamma = 0;
  u64 floor = 0;
  u64 budget = 0;
};

struct IterationTrace {
  IterationStart start;
  std::vector<IncrementStep> steps;
  Outcome outcome = Outcome::StructureFound;
  std::string detail;
  double final_R = 0;
  IndexSet final_set;
  u64 final_d = 1;
};

IterationTrace run_iteration(const IndexSet& A, const IntPoly& h, const IterationConfig& cfg = {});

/// Checks monotone density, d_m | d_{m+1}, shrinking lengths and r_after <= r_before.
std::vector<std::string> trace_violations(const IterationTrace& t);

}  // namespace pintersect
