#pragma once

// Minimal Q[x] arithmetic used by the squarefree decomposition.

#include <vector>

#include "pintersect/polycore.hpp"

namespace pintersect::detail {

using QPoly = std::vector<BigRational>;

QPoly to_qpoly(const IntPoly& p);
void trim(QPoly& p);
int degree(const QPoly& p);
QPoly derivative(const QPoly& p);
QPoly make_monic(QPoly p);
/// Quotient and remainder; b must be nonzero.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
/// Monic gcd.
QPoly gcd(QPoly a, QPoly b);
QPoly sub(const QPoly& a, const QPoly& b);
/// Primitive integer polynomial with positive leading coefficient proportional to p.
IntPoly to_primitive(const QPoly& p);

}  // namespace pintersect::detail
