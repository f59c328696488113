#include "pintersect/polycore.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pintersect/arith.hpp"
#include "pintersect/errors.hpp"
#include "rational_poly.hpp"

namespace pintersect {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

IntPoly IntPoly::monomial(const BigInt& c, int power) {
  if (power < 0) throw std::invalid_argument("monomial: negative power");
  std::vector<BigInt> coeffs(static_cast<std::size_t>(power) + 1);
  coeffs.back() = c;
  return IntPoly(std::move(coeffs));
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

BigInt IntPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

const BigInt& IntPoly::lead() const {
  if (is_zero()) throw std::invalid_argument("lead: zero polynomial");
  return coeffs_.back();
}

BigInt IntPoly::operator()(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::uint64_t IntPoly::eval_mod(std::uint64_t x, std::uint64_t m) const {
  return horner_mod(coeffs_mod(*this, m), x % m, m);
}

IntPoly IntPoly::derivative() const {
  std::vector<BigInt> out;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) out.push_back(coeffs_[i] * static_cast<unsigned long>(i));
  return IntPoly(std::move(out));
}

std::string IntPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1 || i == 0) os << mag.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
  return IntPoly(std::move(out));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<BigInt> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] -= b.coeffs_[i];
  return IntPoly(std::move(out));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly{};
  std::vector<BigInt> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return IntPoly(std::move(out));
}

IntPoly operator*(const BigInt& c, const IntPoly& p) {
  std::vector<BigInt> out = p.coeffs_;
  for (auto& x : out) x *= c;
  return IntPoly(std::move(out));
}

std::vector<std::uint64_t> coeffs_mod(const IntPoly& p, std::uint64_t m) {
  std::vector<std::uint64_t> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(reduce_big(c, m));
  return out;
}

std::uint64_t horner_mod(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t m) {
  std::uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = addmod(mulmod(acc, x, m), *it, m);
  return acc;
}

BigInt eval(const IntPoly& p, const BigInt& x) { return p(x); }

IntPoly shift_scale(const IntPoly& p, const BigInt& r, const BigInt& d) {
  const IntPoly linear(std::vector<BigInt>{r, d});
  IntPoly acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * linear + IntPoly(std::vector<BigInt>{p.coeff(i)});
  return acc;
}

BigInt content(const IntPoly& p) {
  if (p.degree() < 1) throw std::invalid_argument("content: polynomial must have degree >= 1");
  BigInt g = 0;
  for (int i = 1; i <= p.degree(); ++i) g = gcd(g, p.coeff(i));
  return g;
}

BigInt full_content(const IntPoly& p) {
  BigInt g = 0;
  for (const auto& c : p.coeffs()) g = gcd(g, c);
  return g;
}

IntPoly divide_exact(const IntPoly& p, const BigInt& c) {
  if (c == 0) throw std::invalid_argument("divide_exact: division by zero");
  std::vector<BigInt> out;
  out.reserve(p.coeffs().size());
  for (const auto& a : p.coeffs()) {
    if (!mpz_divisible_p(a.get_mpz_t(), c.get_mpz_t()))
      throw InexactDivision("coefficient " + a.get_str() + " is not divisible by " + c.get_str());
    BigInt q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
    out.push_back(std::move(q));
  }
  return IntPoly(std::move(out));
}

namespace {

// Fraction-free Gaussian elimination; every division is exact.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && m[pivot][k] == 0) ++pivot;
      if (pivot == n) return 0;
      std::swap(m[k], m[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

BigInt resultant(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree();
  const int n = b.degree();
  if (m == 0) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), a.coeff(0).get_mpz_t(), static_cast<unsigned long>(n));
    return r;
  }
  if (n == 0) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.coeff(0).get_mpz_t(), static_cast<unsigned long>(m));
    return r;
  }
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<BigInt>> syl(size, std::vector<BigInt>(size));
  for (int row = 0; row < n; ++row)
    for (int i = 0; i <= m; ++i) syl[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + i)] = a.coeff(m - i);
  for (int row = 0; row < m; ++row)
    for (int i = 0; i <= n; ++i)
      syl[static_cast<std::size_t>(n + row)][static_cast<std::size_t>(row + i)] = b.coeff(n - i);
  return bareiss_determinant(std::move(syl));
}

BigInt discriminant_abs(const IntPoly& p) {
  if (p.degree() < 2) throw std::invalid_argument("discriminant_abs: degree must be >= 2");
  BigInt res = abs(resultant(p, p.derivative()));
  BigInt lead = abs(p.lead());
  BigInt q;
  mpz_divexact(q.get_mpz_t(), res.get_mpz_t(), lead.get_mpz_t());
  return q;
}

std::vector<SquarefreeFactor> squarefree_decomposition(const IntPoly& p) {
  if (p.degree() < 1) throw std::invalid_argument("squarefree_decomposition: degree must be >= 1");
  using namespace detail;
  // Yun's algorithm over Q.
  const QPoly f = to_qpoly(p);
  const QPoly fp = derivative(f);
  const QPoly a0 = gcd(f, fp);
  QPoly b = divmod(f, a0).first;
  QPoly c = divmod(fp, a0).first;
  QPoly d = sub(c, derivative(b));
  std::vector<SquarefreeFactor> out;
  int i = 1;
  while (degree(b) >= 1) {
    QPoly a = gcd(b, d);
    if (degree(a) >= 1) out.push_back({to_primitive(a), i});
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, derivative(b));
    ++i;
  }
  return out;
}

IntPoly squarefree_part(const IntPoly& p) {
  IntPoly acc(std::vector<BigInt>{1});
  for (const auto& f : squarefree_decomposition(p)) acc = acc * f.factor;
  return acc;
}

namespace {

BigRational pow_q(const BigRational& x, unsigned long e) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

// |disc| of the monic polynomial proportional to the primitive q.
BigRational monic_disc_abs(const IntPoly& q) {
  const int n = q.degree();
  if (n <= 1) return 1;
  BigRational disc(discriminant_abs(q));
  return disc / pow_q(BigRational(abs(q.lead())), static_cast<unsigned long>(2 * n - 2));
}

BigRational monic_res_abs(const IntPoly& a, const IntPoly& b) {
  BigRational res(abs(resultant(a, b)));
  return res / (pow_q(BigRational(abs(a.lead())), static_cast<unsigned long>(b.degree())) *
                pow_q(BigRational(abs(b.lead())), static_cast<unsigned long>(a.degree())));
}

}  // namespace

BigRational weighted_discriminant_abs(const IntPoly& p) {
  if (p.degree() < 1) throw std::invalid_argument("weighted_discriminant_abs: degree must be >= 1");
  const auto factors = squarefree_decomposition(p);
  const int k = p.degree();
  BigRational acc = pow_q(BigRational(abs(p.lead())), static_cast<unsigned long>(2 * k - 2));
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto e = static_cast<unsigned long>(factors[i].multiplicity);
    acc *= pow_q(monic_disc_abs(factors[i].factor), e * e);
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      const auto f = static_cast<unsigned long>(factors[j].multiplicity);
      acc *= pow_q(monic_res_abs(factors[i].factor, factors[j].factor), 2 * e * f);
    }
  }
  acc.canonicalize();
  return acc;
}

DiscriminantData discriminant_data(const IntPoly& p) {
  DiscriminantData out;
  out.delta_abs = discriminant_abs(p);
  out.weighted_abs = weighted_discriminant_abs(p);
  out.content_h = content(p);
  return out;
}

}  // namespace pintersect
