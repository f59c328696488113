#include "pintersect/intersective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pintersect/errors.hpp"

namespace pintersect {

namespace {

constexpr int kLiftPrecision = 64;

u64 pow_u64(u64 p, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

std::vector<u64> small_primes_upto(u64 n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::vector<u64> roots_prime_power(const IntPoly& h, u64 p, int e) {
  const u64 pe = pow_u64(p, e);
  const auto c = coeffs_mod(h, pe);
  const auto cd = coeffs_mod(h.derivative(), p);
  std::vector<u64> cur;
  for (u64 r = 0; r < p; ++r)
    if (horner_mod(c, r, pe) % p == 0) cur.push_back(r);
  u64 pi = p;  // p^i for the current level i
  for (int i = 1; i < e; ++i) {
    const u64 next_mod = pi * p;
    std::vector<u64> next;
    for (u64 r : cur) {
      const u64 hr = horner_mod(c, r, pe) % next_mod;
      const u64 dr = horner_mod(cd, r % p, p);
      if (dr != 0) {
        // Simple root mod p: exactly one lift.
        const u64 k = hr / pi;
        const u64 step = mulmod((p - k % p) % p, *invmod(dr, p), p);
        next.push_back(r + pi * step);
      } else {
        for (u64 c2 = 0; c2 < p; ++c2) {
          const u64 cand = r + pi * c2;
          if (horner_mod(c, cand, pe) % next_mod == 0) next.push_back(cand);
        }
      }
    }
    cur = std::move(next);
    pi = next_mod;
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

std::vector<u64> crt_combine(const std::vector<u64>& a, u64 ma, const std::vector<u64>& b, u64 mb) {
  std::vector<u64> out;
  out.reserve(a.size() * b.size());
  const u64 inv = *invmod(ma % mb, mb);
  for (u64 r1 : a)
    for (u64 r2 : b) {
      const u64 diff = (r2 + mb - r1 % mb) % mb;
      const u64 t = mulmod(diff, inv, mb);
      out.push_back(static_cast<u64>(r1 + static_cast<u128>(ma) * t));
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct CertifiedNode {
  BigInt r;
  int level;
  int t;
};

// Exact search for the units of Z_p that are roots of the squarefree g.
std::vector<CertifiedNode> coprime_root_nodes(const IntPoly& g, u64 p) {
  const IntPoly gd = g.derivative();
  BigInt sing = abs(g.lead());
  if (g.degree() >= 2) sing *= discriminant_abs(g);
  const int v = valuation(sing, p, 1 << 20);
  const int max_level = 2 * v + 2;

  std::vector<BigInt> frontier;
  {
    const auto c = coeffs_mod(g, p);
    for (u64 r = 1; r < p; ++r)
      if (horner_mod(c, r, p) == 0) frontier.emplace_back(static_cast<unsigned long>(r));
  }
  std::vector<CertifiedNode> out;
  BigInt pi = static_cast<unsigned long>(p);
  for (int level = 1; !frontier.empty(); ++level) {
    if (level > max_level) throw InternalError("p-adic root search did not stabilise");
    std::vector<BigInt> next;
    const BigInt next_mod = pi * static_cast<unsigned long>(p);
    for (const auto& r : frontier) {
      const int t = valuation(gd(r), p, level);
      if (t < level && level >= 2 * t + 1) {
        out.push_back({r, level, t});
        continue;
      }
      for (u64 c = 0; c < p; ++c) {
        BigInt cand = r + pi * static_cast<unsigned long>(c);
        if (mpz_divisible_p(g(cand).get_mpz_t(), next_mod.get_mpz_t())) next.push_back(std::move(cand));
      }
    }
    frontier = std::move(next);
    pi = next_mod;
  }
  return out;
}

BigInt lift_root(const IntPoly& g, u64 p, const BigInt& r, int t, int prec) {
  const IntPoly gd = g.derivative();
  const BigInt pt = big_pow(p, static_cast<unsigned long>(t));
  const BigInt mod = big_pow(p, static_cast<unsigned long>(prec + t));
  BigInt z = r;
  for (int iter = 0; iter < 200; ++iter) {
    const BigInt gz = g(z);
    if (valuation(gz, p, prec + 2 * t + 1) - t >= prec) {
      BigInt out = z % big_pow(p, static_cast<unsigned long>(prec));
      if (out < 0) out += big_pow(p, static_cast<unsigned long>(prec));
      return out;
    }
    const BigInt u = gd(z) / pt;
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), u.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw InternalError("Hensel lift lost the derivative valuation");
    z = (z - (gz / pt) * inv) % mod;
    if (z < 0) z += mod;
  }
  throw InternalError("Hensel lift did not converge");
}

int multiplicity_at(const IntPoly& h, u64 p, const BigInt& z, int prec) {
  const auto factors = squarefree_decomposition(h);
  int best_val = -1;
  int mult = 0;
  for (const auto& f : factors) {
    const int val = valuation(f.factor(z), p, prec);
    if (val > best_val) {
      best_val = val;
      mult = f.multiplicity;
    }
  }
  // Cross-check against successive derivatives.
  const int threshold = prec / 2;
  IntPoly der = h;
  int by_derivative = 0;
  while (!der.is_zero() && valuation(der(z), p, prec) >= threshold) {
    ++by_derivative;
    der = der.derivative();
  }
  if (by_derivative != mult)
    throw InternalError("multiplicity mismatch at p = " + std::to_string(p) + ": factor " + std::to_string(mult) +
                        ", derivatives " + std::to_string(by_derivative));
  return mult;
}

bool is_root_rational(const IntPoly& h, const BigInt& num, const BigInt& den) {
  const int k = h.degree();
  BigInt acc = 0;
  BigInt npow = 1;
  for (int i = 0; i <= k; ++i) {
    BigInt dpow;
    mpz_pow_ui(dpow.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k - i));
    acc += h.coeff(i) * npow * dpow;
    npow *= num;
  }
  return acc == 0;
}

std::vector<u64> divisors_of(u64 n) {
  std::vector<u64> out{1};
  for (const auto& pp : factorize(n)) {
    const std::size_t base = out.size();
    u64 mult = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      mult *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * mult);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Rational roots num/den (lowest terms, den > 0); nullopt when the
// coefficients are too large to enumerate divisors.
std::optional<std::vector<std::pair<BigInt, BigInt>>> rational_roots(const IntPoly& h) {
  std::vector<std::pair<BigInt, BigInt>> out;
  int low = 0;
  while (h.coeff(low) == 0) ++low;
  if (low > 0) out.emplace_back(0, 1);
  std::vector<BigInt> rest(h.coeffs().begin() + low, h.coeffs().end());
  const IntPoly h0(std::move(rest));
  if (h0.degree() == 0) return out;
  const BigInt a0 = abs(h0.coeff(0));
  const BigInt ak = abs(h0.lead());
  const BigInt limit("1000000000000");
  if (a0 > limit || ak > limit) return std::nullopt;
  for (u64 num : divisors_of(a0.get_ui()))
    for (u64 den : divisors_of(ak.get_ui())) {
      if (std::gcd(num, den) != 1) continue;
      for (int sign : {1, -1}) {
        BigInt n = static_cast<unsigned long>(num);
        n *= sign;
        BigInt dd = static_cast<unsigned long>(den);
        if (is_root_rational(h0, n, dd)) out.emplace_back(n, dd);
      }
    }
  return out;
}

}  // namespace

std::vector<u64> roots_mod(const IntPoly& h, u64 q, const RootsModOptions& opts) {
  if (q == 0) throw std::invalid_argument("roots_mod: q must be positive");
  if (q == 1) return {0};
  std::vector<u64> out;
  if (h.is_zero()) {
    out.resize(q);
    for (u64 r = 0; r < q; ++r) out[r] = r;
    return out;
  }
  u64 m = 1;
  out = {0};
  for (const auto& pp : factorize(q)) {
    auto part = roots_prime_power(h, pp.prime, pp.exponent);
    if (part.empty()) return {};
    out = crt_combine(out, m, part, pp.value);
    m *= pp.value;
  }
  if (q <= opts.crosscheck_threshold) {
    const auto c = coeffs_mod(h, q);
    std::vector<u64> brute;
    for (u64 r = 0; r < q; ++r)
      if (horner_mod(c, r, q) == 0) brute.push_back(r);
    if (brute != out) throw InternalError("roots_mod: Hensel path disagrees with brute force at q = " + std::to_string(q));
  }
  return out;
}

bool coprime_root_exists(const IntPoly& h, u64 q) {
  for (u64 r : roots_mod(h, q))
    if (std::gcd(r, q) == 1) return true;
  return false;
}

bool has_coprime_padic_root(const IntPoly& h, u64 p) {
  if (h.degree() < 1) throw std::invalid_argument("has_coprime_padic_root: degree must be >= 1");
  return !coprime_root_nodes(squarefree_part(h), p).empty();
}

std::string to_string(IntersectivityVerdict::Kind kind) {
  switch (kind) {
    case IntersectivityVerdict::Kind::CertifiedUpTo: return "CertifiedUpTo";
    case IntersectivityVerdict::Kind::FailsAt: return "FailsAt";
    case IntersectivityVerdict::Kind::SufficientCondition: return "SufficientCondition";
  }
  return "?";
}

IntersectivityVerdict certify_P_intersective(const IntPoly& h, u64 q_max) {
  if (h.degree() < 1) throw std::invalid_argument("certify: polynomial must have degree >= 1");
  if (q_max < 2) throw std::invalid_argument("certify: q_max must be >= 2");

  IntersectivityVerdict v;
  v.kind = IntersectivityVerdict::Kind::SufficientCondition;
  if (h(BigInt(1)) == 0) {
    v.condition = "root at 1";
    v.details = "h(1) = 0, so r = 1 is a root coprime to every q";
    return v;
  }
  if (h(BigInt(-1)) == 0) {
    v.condition = "root at -1";
    v.details = "h(-1) = 0, so r = -1 is a root coprime to every q";
    return v;
  }
  if (auto roots = rational_roots(h)) {
    for (std::size_t i = 0; i < roots->size(); ++i)
      for (std::size_t j = i + 1; j < roots->size(); ++j) {
        const auto& [a, b] = (*roots)[i];
        const auto& [c, d] = (*roots)[j];
        if (gcd(BigInt(a * b), BigInt(c * d)) == 1) {
          v.condition = "coprime rational roots";
          v.details = "roots " + a.get_str() + "/" + b.get_str() + " and " + c.get_str() + "/" + d.get_str() +
                      " with gcd(ab, cd) = 1";
          return v;
        }
      }
  }

  const IntPoly g = squarefree_part(h);
  u64 best = 0;
  u64 best_prime = 0;
  for (u64 p : small_primes_upto(q_max)) {
    if (best != 0 && p >= best) break;
    if (!coprime_root_nodes(g, p).empty()) continue;
    u64 pj = p;
    while (true) {
      if (!coprime_root_exists(h, pj)) {
        if (best == 0 || pj < best) {
          best = pj;
          best_prime = p;
        }
        break;
      }
      if (pj > q_max / p) break;
      pj *= p;
    }
  }
  if (best != 0) {
    v.kind = IntersectivityVerdict::Kind::FailsAt;
    v.modulus = best;
    v.roots = roots_mod(h, best);
    std::ostringstream os;
    os << "h has no root in Z_" << best_prime << " that is a unit; no r with gcd(r, " << best << ") = 1 satisfies "
       << best << " | h(r)";
    v.details = os.str();
    return v;
  }
  v.kind = IntersectivityVerdict::Kind::CertifiedUpTo;
  v.bound = q_max;
  v.details = "every prime p <= " + std::to_string(q_max) + " admits a unit p-adic root";
  return v;
}

WitnessParams witness_set_params(const IntPoly& h, u64 q) {
  if (q == 0) throw std::invalid_argument("witness_set_params: q must be positive");
  if (coprime_root_exists(h, q))
    throw std::invalid_argument("witness_set_params: h has a root coprime to q = " + std::to_string(q));
  // q | h(p) forces p mod q to be a root, hence p | q.
  BigInt m = 0;
  const BigInt bq = static_cast<unsigned long>(q);
  for (const auto& pp : factorize(q)) {
    const BigInt hp = h(BigInt(static_cast<unsigned long>(pp.prime)));
    if (hp > 0 && mpz_divisible_p(hp.get_mpz_t(), bq.get_mpz_t())) m = std::max(m, BigInt(hp / bq));
  }
  return {q, m, bq * (m + 1)};
}

BigInt PadicRootChoice::residue_mod_power(int e) const {
  if (e > precision) throw std::invalid_argument("residue_mod_power: exponent exceeds lift precision");
  const BigInt pe = big_pow(prime, static_cast<unsigned long>(e));
  BigInt r = lift % pe;
  if (r < 0) r += pe;
  return r;
}

PadicRootChoice select_padic_root(const IntPoly& h, u64 p) {
  if (h.degree() < 1) throw std::invalid_argument("select_padic_root: degree must be >= 1");
  const IntPoly g = squarefree_part(h);
  const auto nodes = coprime_root_nodes(g, p);
  if (nodes.empty()) throw NoCoprimeRoot(p);

  int max_depth = 0;
  for (const auto& n : nodes) max_depth = std::max(max_depth, n.level);
  const BigInt pj = big_pow(p, static_cast<unsigned long>(max_depth));

  const CertifiedNode* chosen = nullptr;
  BigInt chosen_lift;
  BigInt chosen_key;
  for (const auto& n : nodes) {
    BigInt lift = lift_root(g, p, n.r, n.t, kLiftPrecision);
    BigInt key = lift % pj;
    if (chosen == nullptr || key < chosen_key || (key == chosen_key && lift < chosen_lift)) {
      chosen = &n;
      chosen_lift = std::move(lift);
      chosen_key = std::move(key);
    }
  }
  PadicRootChoice out;
  out.prime = p;
  out.depth = chosen->level;
  out.t = chosen->t;
  out.precision = kLiftPrecision;
  out.lift = chosen_lift;
  out.residue = out.residue_mod_power(out.depth);
  out.coprime = true;
  out.multiplicity = multiplicity_at(h, p, chosen_lift, kLiftPrecision);
  return out;
}

std::map<u64, PadicRootChoice> select_padic_roots(const IntPoly& h, const std::vector<u64>& primes) {
  std::map<u64, PadicRootChoice> out;
  for (u64 p : primes) out.emplace(p, select_padic_root(h, p));
  return out;
}

BigInt lambda_of(const std::map<u64, PadicRootChoice>& choices, u64 d) {
  if (d == 0) throw std::invalid_argument("lambda: d must be positive");
  BigInt lam = 1;
  for (const auto& pp : factorize(d)) {
    auto it = choices.find(pp.prime);
    if (it == choices.end()) throw std::invalid_argument("lambda: no root choice for p = " + std::to_string(pp.prime));
    lam *= big_pow(pp.prime, static_cast<unsigned long>(it->second.multiplicity * pp.exponent));
  }
  return lam;
}

AuxData aux_data(const IntPoly& h, const std::map<u64, PadicRootChoice>& choices, u64 d) {
  if (d == 0) throw std::invalid_argument("aux_data: d must be positive");
  if (h.degree() < 1) throw std::invalid_argument("aux_data: degree must be >= 1");
  BigInt r = 0;
  BigInt mod = 1;
  for (const auto& pp : factorize(d)) {
    auto it = choices.find(pp.prime);
    if (it == choices.end()) throw std::invalid_argument("aux_data: no root choice for p = " + std::to_string(pp.prime));
    r = crt_pair(r, mod, it->second.residue_mod_power(pp.exponent), BigInt(static_cast<unsigned long>(pp.value)));
    mod *= static_cast<unsigned long>(pp.value);
  }
  const BigInt bd = static_cast<unsigned long>(d);
  if (r != 0) r -= bd;

  if (!mpz_divisible_p(h(r).get_mpz_t(), bd.get_mpz_t()) || gcd(r, bd) != 1)
    throw InternalError("aux_data: r_d = " + r.get_str() + " violates d | h(r_d) or gcd(r_d, d) = 1");

  AuxData aux;
  aux.d = d;
  aux.r_d = r;
  aux.lambda_d = lambda_of(choices, d);
  aux.h_d = divide_exact(shift_scale(h, r, bd), aux.lambda_d);
  aux.b_d = aux.h_d.lead();
  return aux;
}

HRange h_range(const AuxData& aux, u64 L, u64 s) {
  const IntPoly& hd = aux.h_d;
  if (hd.degree() < 1 || hd.lead() <= 0) throw std::invalid_argument("h_range: h_d needs positive leading coefficient");
  if (s == 0 || L == 0) throw std::invalid_argument("h_range: requires L, s >= 1");
  const int k = hd.degree();
  const BigInt bL = static_cast<unsigned long>(L);
  const BigInt bs = static_cast<unsigned long>(s);

  // Beyond the Cauchy bound of h_d and h_d', h_d is positive and increasing.
  auto cauchy = [](const IntPoly& p) {
    BigInt mx = 0;
    for (int i = 0; i < p.degree(); ++i) mx = std::max(mx, BigInt(abs(p.coeff(i))));
    return BigInt(1 + (mx + abs(p.lead()) - 1) / abs(p.lead()));
  };
  const BigInt bound = std::max(cauchy(hd), hd.degree() >= 2 ? cauchy(hd.derivative()) : BigInt(1));

  HRange out;
  for (BigInt x = 1;; ++x) {
    const BigInt v = hd(x) * bs;
    if (x > bound && v >= bL) break;
    if (v > 0 && v < bL) out.H.push_back(x.get_ui());
  }

  out.M = std::pow(static_cast<long double>(L) / (static_cast<long double>(s) * aux.b_d.get_d()),
                   1.0L / static_cast<long double>(k));
  // ⌊M⌋ = max{x : s b_d x^k <= L}, exactly.
  auto fits = [&](u64 x) {
    BigInt xk;
    mpz_pow_ui(xk.get_mpz_t(), BigInt(static_cast<unsigned long>(x)).get_mpz_t(), static_cast<unsigned long>(k));
    return bs * aux.b_d * xk <= bL;
  };
  u64 mf = static_cast<u64>(std::floor(out.M));
  while (mf > 0 && !fits(mf)) --mf;
  while (fits(mf + 1)) ++mf;
  out.M_floor = mf;

  std::size_t inside = 0;
  for (u64 x : out.H)
    if (x <= mf) ++inside;
  out.symdiff = (out.H.size() - inside) + (mf - inside);
  return out;
}

RootBook::RootBook(IntPoly h) : h_(std::move(h)) {
  if (h_.degree() < 1) throw std::invalid_argument("RootBook: degree must be >= 1");
}

const PadicRootChoice& RootBook::choice(u64 p) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(p);
  if (it == cache_.end())
    it = cache_.emplace(p, std::make_unique<PadicRootChoice>(select_padic_root(h_, p))).first;
  return *it->second;
}

std::map<u64, PadicRootChoice> RootBook::choices_for(u64 d) const {
  std::map<u64, PadicRootChoice> out;
  for (const auto& pp : factorize(d)) out.emplace(pp.prime, choice(pp.prime));
  return out;
}

AuxData RootBook::aux(u64 d) const { return aux_data(h_, choices_for(d), d); }

BigInt RootBook::lambda(u64 d) const { return lambda_of(choices_for(d), d); }

}  // namespace pintersect
