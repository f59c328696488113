#include "pintersect/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "fft.hpp"
#include "pintersect/errors.hpp"
#include "quadrature.hpp"

namespace pintersect {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

u128 low_bits_128(const BigInt& n) {
  BigInt r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), n.get_mpz_t(), 128);
  const u64 lo = mpz_getlimbn(r.get_mpz_t(), 0);
  const u64 hi = mpz_size(r.get_mpz_t()) > 1 ? mpz_getlimbn(r.get_mpz_t(), 1) : 0;
  return (static_cast<u128>(hi) << 64) | lo;
}

// ⌊v 2^64 / q⌋ for v < q.
u64 rational_phase(u64 v, u64 q) { return static_cast<u64>((static_cast<u128>(v) << 64) / q); }

Complex unit_rational(u64 v, u64 q) { return unit_from_phase(rational_phase(v % q, q)); }

void require_coprime(i64 a, u64 q, const char* who) {
  if (q == 0) throw std::invalid_argument(std::string(who) + ": q must be positive");
  if (q > 1 && std::gcd(reduce_signed(a, q), q) != 1)
    throw std::invalid_argument(std::string(who) + ": requires gcd(a, q) = 1");
}

u64 pow2_at_least(u64 n) {
  u64 p = 1;
  while (p < n) p <<= 1;
  return p;
}

int degree_of(const AuxData& aux) {
  const int k = aux.h_d.degree();
  if (k < 1) throw std::invalid_argument("auxiliary polynomial must have degree >= 1");
  return k;
}

// Counts c[v] = #{ℓ < q : g(ℓ) ≡ v, coprime(ℓ)} and returns Σ_v c[v] e(va/q) for every a.
template <class Keep>
std::vector<Complex> all_frequencies(const IntPoly& g, u64 q, Keep keep) {
  const auto cm = coeffs_mod(g, q);
  std::vector<Complex> hist(q, 0.0);
  for (u64 l = 0; l < q; ++l)
    if (keep(l)) hist[horner_mod(cm, l, q)] += 1.0;
  return detail::dft_backward(hist);
}

Complex complete_sum_direct(const IntPoly& g, u64 a, u64 q) {
  const auto cm = coeffs_mod(g, q);
  Complex acc = 0;
  for (u64 l = 0; l < q; ++l) acc += unit_rational(mulmod(horner_mod(cm, l, q), a, q), q);
  return acc;
}

long double eval_real(const IntPoly& p, long double x) {
  long double acc = 0;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + p.coeff(i).get_d();
  return acc;
}

// Real roots of p in (lo, hi), located by sign changes on a grid and bisection.
std::vector<double> real_roots_in(const IntPoly& p, double lo, double hi) {
  std::vector<double> out;
  if (p.degree() < 1 || !(hi > lo)) return out;
  const int n = 64 * std::max(1, p.degree());
  double x0 = lo;
  long double f0 = eval_real(p, x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + (hi - lo) * i / n;
    const long double f1 = eval_real(p, x1);
    if (f0 == 0 && x0 > lo) out.push_back(x0);
    if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
      double a = x0, b = x1;
      long double fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const long double fm = eval_real(p, m);
        if ((fa < 0) == (fm < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

}  // namespace

Frequency Frequency::rational(i64 a, u64 q) {
  if (q == 0) throw std::invalid_argument("Frequency: q must be positive");
  Frequency f;
  f.q_ = q;
  f.a_ = static_cast<i64>(reduce_signed(a, q));
  return f;
}

Frequency Frequency::real(double alpha) { return shifted(0, 1, alpha); }

Frequency Frequency::shifted(i64 a, u64 q, double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("Frequency: beta must be finite");
  Frequency f = rational(a, q);
  f.beta_ = beta;
  const double frac = beta - std::floor(beta);
  // frac is a dyadic rational; both 64-bit halves are taken exactly.
  const double hi_d = std::ldexp(frac, 64);
  const u64 hi = hi_d >= 18446744073709551615.0 ? ~u64{0} : static_cast<u64>(hi_d);
  const u64 lo = static_cast<u64>(std::ldexp(hi_d - static_cast<double>(hi), 64));
  f.beta_fixed_ = (static_cast<u128>(hi) << 64) | lo;
  return f;
}

Frequency Frequency::parse(const std::string& text) {
  const auto s = text;
  if (s.empty()) throw std::invalid_argument("Frequency: empty value");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const auto plus = s.find_first_of("+-", slash + 1);
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1, plus == std::string::npos ? std::string::npos : plus - slash - 1);
    std::size_t used = 0;
    const long long a = std::stoll(num, &used);
    if (used != num.size()) throw std::invalid_argument("Frequency: bad numerator in '" + s + "'");
    const unsigned long long q = std::stoull(den, &used);
    if (used != den.size() || q == 0) throw std::invalid_argument("Frequency: bad denominator in '" + s + "'");
    double beta = 0;
    if (plus != std::string::npos) {
      const std::string rest = s.substr(plus);
      beta = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("Frequency: bad offset in '" + s + "'");
    }
    return shifted(a, q, beta);
  }
  // Plain decimals with few digits become exact rationals.
  const bool neg = s[0] == '-';
  const std::string body = s.substr(neg || s[0] == '+' ? 1 : 0);
  const auto dot = body.find('.');
  const std::string ip = body.substr(0, dot);
  const std::string fp = dot == std::string::npos ? "" : body.substr(dot + 1);
  const auto digits = [](const std::string& t) {
    return std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (digits(ip) && digits(fp) && !(ip.empty() && fp.empty()) && fp.size() <= 18 && ip.size() <= 18) {
    u64 q = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) q *= 10;
    const u64 ipart = ip.empty() ? 0 : std::stoull(ip) % q;
    const u64 fpart = fp.empty() ? 0 : std::stoull(fp);
    const u64 num = (mulmod(ipart, q, q) + fpart) % q;
    const u64 g = std::gcd(num, q);
    const u64 qq = q / g;
    const u64 aa = num / g;
    return rational(neg ? -static_cast<i64>(aa) : static_cast<i64>(aa), qq);
  }
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("Frequency: cannot parse '" + s + "'");
  return real(v);
}

double Frequency::approx() const {
  const double r = static_cast<double>(a_) / static_cast<double>(q_) + beta_;
  return r - std::floor(r);
}

u64 Frequency::phase(const BigInt& n) const {
  u64 ph = 0;
  if (q_ > 1) ph = rational_phase(mulmod(reduce_big(n, q_), static_cast<u64>(a_), q_), q_);
  if (beta_fixed_ != 0) ph += static_cast<u64>((low_bits_128(n) * beta_fixed_) >> 64);
  return ph;
}

u64 Frequency::phase(i64 n) const {
  u64 ph = 0;
  if (q_ > 1) ph = rational_phase(mulmod(reduce_signed(n, q_), static_cast<u64>(a_), q_), q_);
  if (beta_fixed_ != 0) {
    u128 nn = static_cast<u64>(n);
    if (n < 0) nn |= static_cast<u128>(~u64{0}) << 64;
    ph += static_cast<u64>((nn * beta_fixed_) >> 64);
  }
  return ph;
}

Complex unit_from_phase(u64 phase) {
  // Signed phase keeps the angle in [-π, π).
  const double t = std::ldexp(static_cast<double>(static_cast<i64>(phase)), -64);
  return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

Complex transform_at(const SparseFunction& F, double alpha) { return transform_at(F, Frequency::real(alpha)); }

Complex transform_at(const SparseFunction& F, const Frequency& alpha) {
  Complex acc = 0;
  for (const auto& [x, v] : F) acc += v * std::conj(unit_from_phase(alpha.phase(x)));
  return acc;
}

std::vector<Complex> transform_grid(const SparseFunction& F, u64 T) {
  if (T == 0) throw std::invalid_argument("transform_grid: T must be positive");
  std::vector<double> a(T, 0.0);
  for (const auto& [x, v] : F) a[reduce_signed(x, T)] += v;
  return detail::dft_real_forward(a, T);
}

SparseFunction balance_function(const IndexSet& B) {
  if (B.L == 0) throw std::invalid_argument("balance_function: L must be positive");
  const double sigma = B.density();
  const auto bits = B.indicator();
  SparseFunction f;
  f.reserve(B.L);
  for (u64 x = 1; x <= B.L; ++x) f.emplace_back(static_cast<i64>(x), (bits[x] ? 1.0 : 0.0) - sigma);
  return f;
}

Complex weyl_sum(const AuxData& aux, const WeightedPrimes& wp, u64 X, const Frequency& alpha) {
  if (wp.d != aux.d) throw std::invalid_argument("weyl_sum: weights built for a different d");
  if (X + 1 > wp.nu.size()) throw std::invalid_argument("weyl_sum: X exceeds the tabulated range");
  Complex acc = 0;
  for (u64 x = 1; x <= X; ++x) {
    if (wp.nu[x] <= 0) continue;
    acc += wp.nu[x] * unit_from_phase(alpha.phase(aux.h_d(BigInt(static_cast<unsigned long>(x)))));
  }
  return acc;
}

Complex gauss_sum(const AuxData& aux, i64 a, u64 q) {
  require_coprime(a, q, "gauss_sum");
  return twisted_gauss_sum_direct(aux.h_d, static_cast<i64>(aux.d), aux.r_d.get_si(), a, q);
}

std::vector<Complex> gauss_sums_all(const AuxData& aux, u64 q) {
  if (q == 0) throw std::invalid_argument("gauss_sums_all: q must be positive");
  const u64 r = reduce_big(aux.r_d, q), d = aux.d % q;
  return all_frequencies(aux.h_d, q, [&](u64 l) { return std::gcd(addmod(r, mulmod(d, l, q), q), q) == 1; });
}

Complex twisted_gauss_sum_direct(const IntPoly& g, i64 W, i64 b, i64 a, u64 q) {
  require_coprime(a, q, "twisted_gauss_sum");
  const auto cm = coeffs_mod(g, q);
  const u64 w = reduce_signed(W, q), bb = reduce_signed(b, q), aa = reduce_signed(a, q);
  Complex acc = 0;
  for (u64 l = 0; l < q; ++l) {
    if (std::gcd(addmod(mulmod(w, l, q), bb, q), q) != 1) continue;
    acc += unit_rational(mulmod(horner_mod(cm, l, q), aa, q), q);
  }
  return acc;
}

Complex complete_sum(const IntPoly& g, i64 a, u64 q) {
  if (q == 0) throw std::invalid_argument("complete_sum: q must be positive");
  return complete_sum_direct(g, reduce_signed(a, q), q);
}

Complex twisted_gauss_sum_split(const IntPoly& g, i64 W, i64 b, i64 a, u64 q) {
  require_coprime(a, q, "twisted_gauss_sum");
  Complex prod = 1;
  for (const auto& pp : factorize(q)) {
    const u64 qi = pp.value, p = pp.prime;
    const u64 ai = mulmod(reduce_signed(a, qi), *invmod((q / qi) % qi, qi), qi);
    const u64 wp = reduce_signed(W, p), bp = reduce_signed(b, p);
    Complex comp;
    if (wp == 0) {
      if (bp == 0) return 0;
      comp = complete_sum_direct(g, ai, qi);
    } else {
      // Remove the class ℓ ≡ m (mod p) on which p | Wℓ + b.
      const u64 m = mulmod(p - bp == p ? 0 : p - bp, *invmod(wp, p), p);
      const BigInt mb = static_cast<unsigned long>(m);
      const BigInt gm = g(mb);
      const IntPoly shifted = shift_scale(g, mb, BigInt(static_cast<unsigned long>(p)));
      const IntPoly gt = divide_exact(shifted - IntPoly(std::vector<BigInt>{gm}), BigInt(static_cast<unsigned long>(p)));
      const u64 qr = qi / p;
      const Complex inner = qr == 1 ? Complex(1.0) : complete_sum_direct(gt, ai % qr, qr);
      comp = complete_sum_direct(g, ai, qi) - unit_rational(mulmod(reduce_big(gm, qi), ai, qi), qi) * inner;
    }
    prod *= comp;
  }
  return prod;
}

GaussRatio gauss_bound_ratio(const AuxData& aux, u64 q) {
  const int k = degree_of(aux);
  const auto G = gauss_sums_all(aux, q);
  const double norm = std::pow(static_cast<double>(q), 1.0 - 1.0 / k);
  GaussRatio best;
  for (u64 a = 0; a < q; ++a) {
    if (q > 1 && std::gcd(a, q) != 1) continue;
    const double r = std::abs(G[a]) / norm;
    if (r > best.ratio) best = {r, a};
  }
  return best;
}

double complete_sum_ratio(const IntPoly& g, u64 q) {
  const int k = g.degree();
  if (k < 1) throw std::invalid_argument("complete_sum_ratio: degree must be >= 1");
  if (q == 0) throw std::invalid_argument("complete_sum_ratio: q must be positive");
  const auto S = all_frequencies(g, q, [](u64) { return true; });
  const BigInt c = gcd(content(g), BigInt(static_cast<unsigned long>(q)));
  const double norm = std::pow(c.get_d(), 1.0 / k) * std::pow(static_cast<double>(q), 1.0 - 1.0 / k);
  double best = 0;
  for (u64 a = 0; a < q; ++a) {
    if (q > 1 && std::gcd(a, q) != 1) continue;
    best = std::max(best, std::abs(S[a]) / norm);
  }
  return best;
}

bool ArcSystem::in_major(double alpha) const {
  const double x = alpha - std::floor(alpha);
  for (u64 q = 1; q <= Q; ++q) {
    const double qd = static_cast<double>(q);
    const double a = std::nearbyint(x * qd);
    if (std::gcd(static_cast<u64>(a) % q, q) != 1 && q > 1) continue;
    if (std::fabs(x - a / qd) < radius) return true;
  }
  return false;
}

ArcSystem make_arcs(u64 L, double eta, double gamma, std::size_t max_arcs) {
  if (L == 0) throw std::invalid_argument("make_arcs: L must be positive");
  if (!(eta > 0 && eta <= 1)) throw std::invalid_argument("make_arcs: eta must lie in (0, 1]");
  if (!(gamma > 0)) throw std::invalid_argument("make_arcs: gamma must be positive");
  ArcSystem arcs;
  arcs.L = L;
  arcs.eta = eta;
  arcs.gamma = gamma;
  const double inv = std::pow(eta, -gamma);
  const double near = std::nearbyint(inv);
  const double qf = std::fabs(inv - near) <= 1e-9 * near ? near : std::floor(inv);
  if (qf > 1e9) throw ArcSystemTooLarge("make_arcs: arc system too large");
  arcs.Q = static_cast<u64>(qf);
  arcs.radius = inv / static_cast<double>(L);
  std::size_t total = 0;
  for (u64 q = 1; q <= arcs.Q; ++q) {
    total += euler_phi(q);
    if (total > max_arcs) throw ArcSystemTooLarge("make_arcs: more than " + std::to_string(max_arcs) + " major arcs");
  }
  arcs.majors.reserve(total);
  for (u64 q = 1; q <= arcs.Q; ++q)
    for (u64 a = 0; a < q; ++a)
      if (std::gcd(a, q) == 1) arcs.majors.push_back({q, a});
  return arcs;
}

u64 default_grid(u64 L) { return pow2_at_least(4 * std::max<u64>(L, 1)); }

L2Report l2_concentration(const IndexSet& B, const ArcSystem& arcs, u64 grid) {
  if (grid < 4 * B.L) throw std::invalid_argument("l2_concentration: grid must be at least 4L");
  L2Report rep;
  rep.grid = grid;
  const auto f = balance_function(B);
  for (const auto& [x, v] : f) rep.direct_mass += v * v;
  const auto F = transform_grid(f, grid);
  const double T = static_cast<double>(grid);
  std::vector<double> cell(grid);
  for (u64 t = 0; t < grid; ++t) {
    cell[t] = std::norm(F[t]) / T;
    rep.plancherel_mass += cell[t];
  }
  std::vector<std::uint8_t> in_union(grid, 0);
  std::vector<u64> stamp(grid, 0);
  for (const auto& arc : arcs.majors) {
    const double c = static_cast<double>(arc.a) / static_cast<double>(arc.q);
    const auto lo = static_cast<i64>(std::ceil((c - arcs.radius) * T));
    const auto hi = static_cast<i64>(std::floor((c + arcs.radius) * T));
    double& mass = rep.mass_by_q[arc.q];
    for (i64 t = lo; t <= hi; ++t) {
      if (std::fabs(static_cast<double>(t) / T - c) >= arcs.radius) continue;
      const u64 u = reduce_signed(t, grid);
      if (stamp[u] != arc.q) {
        stamp[u] = arc.q;
        mass += cell[u];
      }
      in_union[u] = 1;
    }
  }
  for (u64 t = 0; t < grid; ++t) (in_union[t] ? rep.major_mass : rep.minor_mass) += cell[t];
  return rep;
}

OscillatoryIntegral oscillatory_integral(const AuxData& aux, double beta, double lo, double hi,
                                         const ExceptionalData* exc, int panel_scale) {
  if (!(hi >= lo)) throw std::invalid_argument("oscillatory_integral: requires lo <= hi");
  if (panel_scale < 1) throw std::invalid_argument("oscillatory_integral: panel_scale must be positive");
  OscillatoryIntegral out;
  if (hi == lo) return out;
  Complex chi_r = 0;
  double rho = 0;
  const bool exceptional = exc != nullptr && exc->q0 > 1;
  if (exceptional) {
    if (exc->chi.size() != exc->q0) throw std::invalid_argument("exceptional data: chi table must have q0 entries");
    chi_r = exc->chi[reduce_big(aux.r_d, exc->q0)];
    rho = exc->rho;
  }
  const IntPoly& h = aux.h_d;
  const double d = static_cast<double>(aux.d);
  auto f = [&](double x) -> Complex {
    long double ph = eval_real(h, x) * static_cast<long double>(beta);
    ph -= std::floor(ph);
    const double t = static_cast<double>(ph);
    Complex v{std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
    if (exceptional) v *= 1.0 - chi_r * std::pow(d * x, rho - 1.0);
    return v;
  };
  // Break at stationary points, then give each monotone piece enough panels
  // that no panel spans more than a fraction of a cycle.
  std::vector<double> pieces{lo};
  for (double r : real_roots_in(h.derivative(), lo, hi)) pieces.push_back(r);
  pieces.push_back(hi);
  std::vector<double> breaks{lo};
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const double a = pieces[i], b = pieces[i + 1];
    const double cycles =
        std::fabs(static_cast<double>((eval_real(h, b) - eval_real(h, a)) * static_cast<long double>(beta)));
    const auto n = static_cast<long>(std::min(1e6, std::ceil(2 * cycles) + 1) * panel_scale);
    for (long j = 1; j <= n; ++j) breaks.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(n));
  }
  const auto res = detail::integrate_adaptive(f, breaks, 1e-12, 1e-11);
  out.value = res.value;
  out.error_estimate = res.error_estimate;
  out.evaluations = res.evaluations;
  return out;
}

MainTerm main_term_asym2(const AuxData& aux, i64 a, u64 q, double beta, double M, const ExceptionalData* exc) {
  require_coprime(a, q, "main_term_asym2");
  if (!(M >= 1)) throw std::invalid_argument("main_term_asym2: M must be >= 1");
  MainTerm mt;
  mt.gauss = gauss_sum(aux, a, q);
  mt.phi_ratio = static_cast<double>(euler_phi(aux.d)) / static_cast<double>(euler_phi(q * aux.d));
  mt.integral = beta == 0 && (exc == nullptr || exc->q0 <= 1) ? Complex(M - 1)
                                                             : oscillatory_integral(aux, beta, 1.0, M, exc).value;
  mt.value = mt.phi_ratio * mt.gauss * mt.integral;
  return mt;
}

double main_term_residual(const AuxData& aux, const WeightedPrimes& wp, i64 a, u64 q, double beta,
                          const ExceptionalData* exc) {
  const Complex S = weyl_sum(aux, wp, wp.M_floor, Frequency::shifted(a, q, beta));
  const auto mt = main_term_asym2(aux, a, q, beta, static_cast<double>(wp.M), exc);
  return std::abs(S - mt.value);
}

MomentResult moment_sum(const AuxData& aux, const WeightedPrimes& wp, MomentKind kind, unsigned s, u64 N) {
  if (s == 0 || s % 2 != 0) throw std::invalid_argument("moment_sum: s must be a positive even integer");
  if (wp.d != aux.d) throw std::invalid_argument("moment_sum: weights built for a different d");
  if (!(wp.psi_total > 0)) throw PsiVanishes("moment_sum: Psi_d vanishes");
  std::vector<std::pair<BigInt, double>> terms;  // (h_d(x), weight)
  BigInt max_h = 0;
  const IntPoly dh = aux.h_d.derivative();
  for (u64 x : wp.H) {
    if (!wp.in_lambda(x)) continue;
    const BigInt X = static_cast<unsigned long>(x);
    const BigInt hx = aux.h_d(X);
    max_h = std::max(max_h, BigInt(abs(hx)));
    double w = wp.nu[x] / wp.psi_total;
    if (kind == MomentKind::W) w *= dh(X).get_d();
    terms.emplace_back(hx, w);
  }
  const BigInt need = 2 * max_h;
  if (N == 0) N = pow2_at_least(std::max<u64>(need.get_ui(), 1));
  if (BigInt(static_cast<unsigned long>(N)) < need) throw std::invalid_argument("moment_sum: N below 2 max h_d (aliasing)");
  const double scale = kind == MomentKind::W ? static_cast<double>(wp.M) / static_cast<double>(N) : 1.0;
  MomentResult res;
  res.N = N;
  std::vector<Complex> c(N, 0.0);
  for (const auto& [hx, w] : terms) {
    c[reduce_big(hx, N)] += w * scale;
    res.parseval_rhs += (w * scale) * (w * scale);
  }
  const auto Tv = detail::dft_backward(c);
  res.at_zero = Tv[0];
  for (const auto& v : Tv) {
    const double m = std::abs(v);
    res.value += std::pow(m, static_cast<double>(s));
    res.parseval_lhs += m * m;
  }
  res.parseval_lhs /= static_cast<double>(N);
  return res;
}

OrthogonalityCheck orthogonality_identity(const IndexSet& B, const AuxData& aux, const WeightedPrimes& wp, u64 T) {
  if (wp.d != aux.d || wp.L != B.L) throw std::invalid_argument("orthogonality_identity: incompatible inputs");
  std::vector<std::pair<i64, double>> lags;  // (h_d(y), ν(y))
  i64 max_lag = 0;
  for (u64 y : wp.H) {
    if (!wp.in_lambda(y)) continue;
    const BigInt g = aux.h_d(BigInt(static_cast<unsigned long>(y)));
    if (!g.fits_slong_p()) throw std::invalid_argument("orthogonality_identity: lag out of range");
    lags.emplace_back(g.get_si(), wp.nu[y]);
    max_lag = std::max(max_lag, std::abs(g.get_si()));
  }
  const u64 need = std::max<u64>(2 * B.L, B.L + static_cast<u64>(max_lag));
  if (T == 0) T = pow2_at_least(need);
  if (T < need) throw std::invalid_argument("orthogonality_identity: period too small for an exact identity");

  OrthogonalityCheck out;
  out.T = T;
  const auto f = balance_function(B);
  const auto F = transform_grid(f, T);
  std::vector<Complex> hist(T, 0.0);
  for (const auto& [g, nu] : lags) hist[reduce_signed(g, T)] += nu;
  const auto S = detail::dft_backward(hist);
  Complex acc = 0;
  for (u64 t = 0; t < T; ++t) acc += std::norm(F[t]) * S[t];
  acc /= static_cast<double>(T);
  out.fourier_side = acc.real();
  out.imag_residue = std::fabs(acc.imag());

  std::vector<double> fv(B.L + 1, 0.0);
  for (const auto& [x, v] : f) fv[static_cast<u64>(x)] = v;
  const i64 L = static_cast<i64>(B.L);
  for (const auto& [g, nu] : lags) {
    double corr = 0;
    for (i64 x = std::max<i64>(1, 1 - g); x <= std::min<i64>(L, L - g); ++x) corr += fv[x] * fv[x + g];
    out.direct_side += nu * corr;
  }
  return out;
}

}  // namespace pintersect
