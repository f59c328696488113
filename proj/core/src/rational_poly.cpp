#include "rational_poly.hpp"

#include <stdexcept>

namespace pintersect::detail {

QPoly to_qpoly(const IntPoly& p) {
  QPoly out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.emplace_back(c);
  return out;
}

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

QPoly derivative(const QPoly& p) {
  QPoly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * static_cast<long>(i));
  trim(out);
  return out;
}

QPoly make_monic(QPoly p) {
  trim(p);
  if (p.empty()) return p;
  BigRational lc = p.back();
  for (auto& c : p) c /= lc;
  return p;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.empty()) throw std::invalid_argument("divmod: division by zero polynomial");
  QPoly rem = a;
  trim(rem);
  const int db = degree(b);
  if (degree(rem) < db) return {QPoly{}, rem};
  QPoly quo(static_cast<std::size_t>(degree(rem) - db + 1));
  while (!rem.empty() && degree(rem) >= db) {
    const int shift = degree(rem) - db;
    BigRational factor = rem.back() / b.back();
    quo[static_cast<std::size_t>(shift)] = factor;
    for (int i = 0; i <= db; ++i) rem[static_cast<std::size_t>(i + shift)] -= factor * b[static_cast<std::size_t>(i)];
    rem.back() = 0;
    trim(rem);
  }
  trim(quo);
  return {quo, rem};
}

QPoly gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

IntPoly to_primitive(const QPoly& p) {
  BigInt den = 1;
  for (const auto& c : p) den = lcm(den, BigInt(c.get_den()));
  std::vector<BigInt> coeffs;
  coeffs.reserve(p.size());
  for (const auto& c : p) coeffs.push_back(BigInt(c.get_num()) * (den / BigInt(c.get_den())));
  BigInt g = 0;
  for (const auto& c : coeffs) g = gcd(g, c);
  if (g == 0) return IntPoly{};
  if (coeffs.back() < 0) g = -g;
  for (auto& c : coeffs) c /= g;
  return IntPoly(std::move(coeffs));
}

}  // namespace pintersect::detail
