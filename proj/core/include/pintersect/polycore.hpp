#pragma once

// Exact integer polynomial arithmetic over arbitrary-precision coefficients.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace pintersect {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Dense polynomial in Z[x], coefficients stored lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and has degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly monomial(const BigInt& c, int power);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of x^i; zero above the degree.
  BigInt coeff(int i) const;
  const BigInt& lead() const;

  BigInt operator()(const BigInt& x) const;
  /// h(x) mod m in [0, m); requires m >= 1 and m < 2^63.
  std::uint64_t eval_mod(std::uint64_t x, std::uint64_t m) const;

  IntPoly derivative() const;

  std::string to_string() const;

  friend bool operator==(const IntPoly&, const IntPoly&) = default;
  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const BigInt& c, const IntPoly& p);

 private:
  void trim();
  std::vector<BigInt> coeffs_;
};

/// Coefficients reduced into [0, m), for repeated evaluation modulo m.
std::vector<std::uint64_t> coeffs_mod(const IntPoly& p, std::uint64_t m);
std::uint64_t horner_mod(const std::vector<std::uint64_t>& coeffs, std::uint64_t x, std::uint64_t m);

/// Σ a_i x^i, exact.
BigInt eval(const IntPoly& p, const BigInt& x);

/// q(x) = p(r + d·x).
IntPoly shift_scale(const IntPoly& p, const BigInt& r, const BigInt& d);

/// gcd(a_1, ..., a_k). The constant term is excluded. Requires degree >= 1.
BigInt content(const IntPoly& p);

/// gcd of every coefficient including a_0 (zero for the zero polynomial).
BigInt full_content(const IntPoly& p);

/// Divides every coefficient by c; throws InexactDivision if any remainder is nonzero.
IntPoly divide_exact(const IntPoly& p, const BigInt& c);

/// Resultant of two nonzero integer polynomials via the Sylvester determinant.
BigInt resultant(const IntPoly& a, const IntPoly& b);

/// |Res(p, p')| / |lead(p)|, which vanishes exactly when p has a repeated root.
/// Requires degree >= 2.
BigInt discriminant_abs(const IntPoly& p);

/// One factor of a squarefree decomposition: a primitive integer polynomial
/// with positive leading coefficient, raised to `multiplicity` in p.
struct SquarefreeFactor {
  IntPoly factor;
  int multiplicity;
};

/// p = c · Π factor^multiplicity with pairwise coprime squarefree factors.
/// Factors of degree 0 are omitted. Requires degree >= 1.
std::vector<SquarefreeFactor> squarefree_decomposition(const IntPoly& p);

/// Product of the squarefree factors (primitive, positive leading coefficient).
IntPoly squarefree_part(const IntPoly& p);

/// |a^{2k-2} Π_{i≠j} (α_i − α_j)^{e_i e_j}| for p = a Π (x − α_i)^{e_i}, the
/// multiplicity-weighted discriminant that controls the content of the
/// auxiliary polynomials. Nonzero for every p of degree >= 1.
BigRational weighted_discriminant_abs(const IntPoly& p);

struct DiscriminantData {
  BigInt delta_abs;           // |Res(p, p')| / |lead|
  BigRational weighted_abs;   // multiplicity-weighted form, see above
  BigInt content_h;           // gcd(a_1..a_k)
};

DiscriminantData discriminant_data(const IntPoly& p);

}  // namespace pintersect
