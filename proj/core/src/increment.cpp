#include "pintersect/increment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pintersect/errors.hpp"

namespace pintersect {

namespace {

u64 to_u64(const BigInt& v, const char* what) {
  if (v < 0 || !v.fits_ulong_p()) throw std::invalid_argument(std::string(what) + " does not fit in 64 bits");
  return v.get_ui();
}

u64 isqrt_ceil(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while (r * r < n) ++r;
  return r;
}

// Members of B in [lo, hi].
u64 count_in(const IndexSet& B, u64 lo, u64 hi) {
  if (lo > hi) return 0;
  const auto a = std::lower_bound(B.members.begin(), B.members.end(), lo);
  const auto b = std::upper_bound(B.members.begin(), B.members.end(), hi);
  return static_cast<u64>(b - a);
}

IncrementStep make_step(const IndexSet& B, u64 d, const StructureGate& gate) {
  IncrementStep st;
  st.sigma_in = B.sigma();
  st.sigma_out = st.sigma_in;
  st.L_in = B.L;
  st.L_out = B.L;
  st.d_in = d;
  st.d_out = d;
  st.r_before = gate.R.value;
  st.r_after = gate.R.value;
  st.threshold = gate.threshold;
  return st;
}

// Extracts B' along the progression and certifies R_{qd}(B') <= R_d(B).
void finish_step(IncrementStep& st, const IndexSet& B, const StructureGate& before, const RootBook& book,
                 const IterationConfig& cfg) {
  st.B_out = extract_subprogression(B, st.x0, st.lambda_q, st.L_out);
  st.sigma_out = st.B_out.sigma();
  const StructureGate after = evaluate_gate(st.B_out, book, st.d_out, cfg);
  st.r_after = after.R.value;
  if (!r_dominated(after.R, before.R))
    throw InternalError("increment: R_{qd}(B') <= R_d(B) failed the exact per-prime certificate");
}

}  // namespace

double gamma_of(const IntPoly& h, const IterationConfig& cfg) {
  if (!(cfg.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  return h.degree() + cfg.epsilon / 2;
}

u64 s_param(const IntPoly& h, const IterationConfig& cfg) {
  if (cfg.s) {
    if (*cfg.s == 0) throw std::invalid_argument("s must be positive");
    return *cfg.s;
  }
  return (u64{1} << h.degree()) + 6;
}

u64 default_budget(double delta, double gamma, double C) {
  if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("default_budget: delta must lie in (0, 1]");
  if (!(C > 0)) throw std::invalid_argument("default_budget: C must be positive");
  return static_cast<u64>(std::ceil(C * std::pow(delta, -(gamma - 1))));
}

std::optional<EdgeInterval> edge_case_check(const IndexSet& B) {
  const u64 L = B.L;
  const u64 n = B.size();
  if (L == 0 || n == 0) return std::nullopt;
  // (L/9, 8L/9) holds x with L < 9x < 8L.
  const u64 mid_lo = L / 9 + 1, mid_hi = (8 * L - 1) / 9;
  if (4 * count_in(B, mid_lo, mid_hi) >= 3 * n) return std::nullopt;
  // [1, L/9] and [8L/9, L].
  const u64 left_len = L / 9;
  const u64 right_start = (8 * L + 8) / 9;
  const u64 right_len = right_start <= L ? L - right_start + 1 : 0;
  EdgeInterval left{1, left_len, count_in(B, 1, left_len), true};
  EdgeInterval right{right_start, right_len, count_in(B, right_start, L), false};
  // density >= 9σ/8  ⟺  8 L count >= 9 n len.
  auto qualifies = [&](const EdgeInterval& e) {
    return e.length > 0 && BigInt(8) * L * e.count >= BigInt(9) * n * e.length;
  };
  const bool l_ok = qualifies(left), r_ok = qualifies(right);
  if (!l_ok && !r_ok) return std::nullopt;
  if (l_ok && r_ok)
    return BigInt(static_cast<unsigned long>(right.count)) * left.length >
                   BigInt(static_cast<unsigned long>(left.count)) * right.length
               ? right
               : left;
  return l_ok ? left : right;
}

Progression densest_block(const IndexSet& B, u64 lambda, u64 L_target) {
  if (lambda == 0 || L_target == 0) throw std::invalid_argument("densest_block: lambda and length must be positive");
  const auto bits = B.indicator();
  Progression best;
  bool have = false;
  std::vector<Progression> blocks;
  for (u64 c = 1; c <= std::min(lambda, B.L); ++c) {
    const u64 n = (B.L - c) / lambda + 1;  // c, c + λ, ..., within [1, L]
    const u64 nb = (n + L_target - 1) / L_target;
    const u64 base = n / nb, extra = n % nb;
    u64 idx = 0;
    for (u64 b = 0; b < nb; ++b) {
      const u64 len = base + (b < extra ? 1 : 0);
      const u64 first = c + idx * lambda;
      u64 cnt = 0;
      for (u64 j = 0; j < len; ++j) cnt += bits[first + j * lambda];
      blocks.push_back({static_cast<i64>(first) - static_cast<i64>(lambda), lambda, len, cnt});
      idx += len;
    }
  }
  std::sort(blocks.begin(), blocks.end(), [](const Progression& a, const Progression& b) { return a.x0 < b.x0; });
  for (const auto& p : blocks) {
    // count/len > best.count/best.len, ties keep the leftmost.
    if (!have || static_cast<u128>(p.count) * best.length > static_cast<u128>(best.count) * p.length) {
      best = p;
      have = true;
    }
  }
  return best;
}

ConcentrationResult concentration_step(const IndexSet& B, const RootBook& book, const IterationConfig& cfg) {
  if (B.size() == 0) throw std::invalid_argument("concentration_step: empty set");
  const double sigma = B.density();
  const double gamma = gamma_of(book.poly(), cfg);
  ConcentrationResult res;
  res.eta = cfg.c2 * sigma;
  if (!(res.eta > 0 && res.eta <= 1)) throw std::invalid_argument("concentration_step: need 0 < c2 σ <= 1");
  const ArcSystem arcs = make_arcs(B.L, res.eta, gamma, cfg.max_arcs);
  res.Q = arcs.Q;
  const L2Report rep = l2_concentration(B, arcs, default_grid(B.L));
  res.plancherel_mass = rep.plancherel_mass;
  res.major_mass = rep.major_mass;
  bool have = false;
  for (const auto& [q, m] : rep.mass_by_q) {  // ascending q: strict > keeps the smallest on ties
    if (!have || m > res.arc_mass) {
      res.q = q;
      res.arc_mass = m;
      have = true;
    }
  }
  const double L = static_cast<double>(B.L);
  res.omega = res.arc_mass / (sigma * sigma * L);
  res.lambda_q = to_u64(book.lambda(res.q), "lambda(q)");
  const u64 cap = B.L / res.lambda_q;
  if (cap == 0) throw NoIncrement("concentration_step: lambda(q) exceeds L");
  const double scale = std::min(std::pow(res.eta, gamma), res.omega * sigma);
  const double target = std::floor(scale * L / static_cast<double>(res.lambda_q));
  res.L_target = static_cast<u64>(std::clamp(target, 1.0, static_cast<double>(cap)));
  res.best = densest_block(B, res.lambda_q, res.L_target);
  // Strict gain over σ = n / L, compared exactly.
  if (static_cast<u128>(res.best.count) * B.L <= static_cast<u128>(B.size()) * res.best.length)
    throw NoIncrement("concentration_step: no progression of step " + std::to_string(res.lambda_q) +
                      " beats the current density (q = " + std::to_string(res.q) + ")");
  return res;
}

StructureGate evaluate_gate(const IndexSet& B, const RootBook& book, u64 d, const IterationConfig& cfg) {
  StructureGate g;
  const AuxData aux = book.aux(d);
  g.wp = weighted_primes(aux, B.L, s_param(book.poly(), cfg));
  g.psi = g.wp.psi_total;
  g.R = count_R_fft(B, aux, g.wp);
  const double sigma = B.density();
  g.threshold = std::isinf(cfg.deficiency) ? std::numeric_limits<double>::infinity()
                                           : cfg.deficiency * sigma * sigma * static_cast<double>(B.L) * g.psi;
  return g;
}

namespace {

IncrementStep advance(const IndexSet& B, u64 d, const RootBook& book, const IterationConfig& cfg,
                      const StructureGate& gate) {
  IncrementStep st = make_step(B, d, gate);
  if (const auto edge = edge_case_check(B)) {
    st.branch = "edge-interval";
    st.q = 1;
    st.lambda_q = 1;
    st.x0 = static_cast<i64>(edge->start) - 1;
    st.L_out = edge->length;
    st.d_out = d;
  } else {
    const auto c = concentration_step(B, book, cfg);
    st.branch = "concentration";
    st.q = c.q;
    st.lambda_q = c.lambda_q;
    st.x0 = c.best.x0;
    st.L_out = c.best.length;
    st.d_out = c.q * d;
    st.omega = c.omega;
    st.increment_target = B.density() * (1 + c.omega / 4);
  }
  finish_step(st, B, gate, book, cfg);
  return st;
}

}  // namespace

IncrementStep increment_once(const IndexSet& B, u64 d, const RootBook& book, const IterationConfig& cfg,
                             u64 floor_L) {
  if (B.L < floor_L) throw std::invalid_argument("increment_once: L below the length floor");
  const StructureGate gate = evaluate_gate(B, book, d, cfg);
  if (!(gate.psi > 0)) throw PsiVanishes("increment_once: Psi_d vanishes");
  if (gate.structure_found()) {
    IncrementStep st = make_step(B, d, gate);
    st.branch = "structure";
    st.B_out = B;
    return st;
  }
  return advance(B, d, book, cfg, gate);
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::StructureFound: return "StructureFound";
    case Outcome::DensitySaturated: return "DensitySaturated";
    case Outcome::StepBudgetExhausted: return "StepBudgetExhausted";
    case Outcome::LengthFloorReached: return "LengthFloorReached";
    case Outcome::NoIncrement: return "NoIncrement";
    case Outcome::ArcSystemTooLarge: return "ArcSystemTooLarge";
    case Outcome::PsiVanishes: return "PsiVanishes";
  }
  return "?";
}

Outcome parse_outcome(const std::string& s) {
  for (auto o : {Outcome::StructureFound, Outcome::DensitySaturated, Outcome::StepBudgetExhausted,
                 Outcome::LengthFloorReached, Outcome::NoIncrement, Outcome::ArcSystemTooLarge, Outcome::PsiVanishes})
    if (to_string(o) == s) return o;
  throw std::invalid_argument("unknown outcome '" + s + "'");
}

IterationTrace run_iteration(const IndexSet& A, const IntPoly& h, const IterationConfig& cfg) {
  if (A.L == 0) throw std::invalid_argument("run_iteration: N must be positive");
  if (A.size() == 0) throw std::invalid_argument("run_iteration: A must be nonempty");
  if (cfg.q0 == 0 || cfg.d0 == 0) throw std::invalid_argument("run_iteration: q0 and d0 must be positive");
  const RootBook book(h);
  IterationTrace tr;
  tr.start.N = A.L;
  tr.start.size = A.size();
  tr.start.delta = A.sigma();
  tr.start.d0 = cfg.d0;
  tr.start.q0 = cfg.q0;
  tr.start.s = s_param(h, cfg);
  tr.start.gamma = gamma_of(h, cfg);
  tr.start.floor = cfg.floor ? *cfg.floor : isqrt_ceil(A.L);
  tr.start.budget = cfg.budget ? *cfg.budget : default_budget(A.density(), tr.start.gamma, cfg.budget_C);

  IndexSet B = A;
  u64 d = cfg.d0;
  try {
    if (cfg.q0 > 1) {
      // Pigeonhole onto a λ(q0)-progression of length in [N/2λ, N/λ].
      const StructureGate gate = evaluate_gate(B, book, d, cfg);
      IncrementStep st = make_step(B, d, gate);
      st.branch = "pigeonhole";
      st.q = cfg.q0;
      st.lambda_q = to_u64(book.lambda(cfg.q0), "lambda(q0)");
      const u64 len = B.L / st.lambda_q;
      if (len == 0) throw std::invalid_argument("run_iteration: lambda(q0) exceeds N");
      const Progression p = densest_block(B, st.lambda_q, len);
      st.x0 = p.x0;
      st.L_out = p.length;
      st.d_out = cfg.q0 * d;
      finish_step(st, B, gate, book, cfg);
      B = st.B_out;
      d = st.d_out;
      tr.steps.push_back(std::move(st));
    }
    u64 taken = 0;
    for (;;) {
      // Below the floor the weights may vanish, so this test precedes the gate.
      if (B.L < tr.start.floor) {
        tr.outcome = Outcome::LengthFloorReached;
        tr.final_R = tr.steps.empty() ? 0.0 : tr.steps.back().r_after;
        break;
      }
      const StructureGate gate = evaluate_gate(B, book, d, cfg);
      tr.final_R = gate.R.value;
      if (!(gate.psi > 0)) {
        tr.outcome = Outcome::PsiVanishes;
        tr.detail = "Psi_d = 0 at d = " + std::to_string(d) + ", L = " + std::to_string(B.L);
        break;
      }
      if (gate.structure_found()) {
        tr.outcome = Outcome::StructureFound;
        tr.detail = "R_d(B) exceeds the deficiency threshold";
        break;
      }
      if (B.density() > cfg.ceiling) {
        tr.outcome = Outcome::DensitySaturated;
        break;
      }
      if (taken >= tr.start.budget) {
        tr.outcome = Outcome::StepBudgetExhausted;
        break;
      }
      IncrementStep st = advance(B, d, book, cfg, gate);
      B = st.B_out;
      d = st.d_out;
      tr.steps.push_back(std::move(st));
      ++taken;
    }
  } catch (const NoIncrement& e) {
    tr.outcome = Outcome::NoIncrement;
    tr.detail = e.what();
  } catch (const ArcSystemTooLarge& e) {
    tr.outcome = Outcome::ArcSystemTooLarge;
    tr.detail = e.what();
  } catch (const PsiVanishes& e) {
    tr.outcome = Outcome::PsiVanishes;
    tr.detail = e.what();
  }
  tr.final_set = B;
  tr.final_d = d;
  return tr;
}

std::vector<std::string> trace_violations(const IterationTrace& t) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    const std::string at = "step " + std::to_string(i) + ": ";
    if (s.branch == "concentration" && !(s.sigma_out > s.sigma_in)) out.push_back(at + "density did not increase");
    if (s.sigma_out < s.sigma_in && s.branch != "pigeonhole") out.push_back(at + "density decreased");
    if (s.d_out % s.d_in != 0) out.push_back(at + "d_in does not divide d_out");
    if (s.L_out * s.lambda_q > s.L_in) out.push_back(at + "L_out exceeds L_in / lambda(q)");
    if (s.r_after > s.r_before) out.push_back(at + "r_after exceeds r_before");
    if (i > 0) {
      const auto& p = t.steps[i - 1];
      if (p.d_out != s.d_in) out.push_back(at + "d does not chain");
      if (p.L_out != s.L_in) out.push_back(at + "L does not chain");
      if (s.sigma_in != p.sigma_out) out.push_back(at + "density does not chain");
    }
  }
  return out;
}

}  // namespace pintersect
