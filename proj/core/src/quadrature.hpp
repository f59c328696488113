#pragma once

// Adaptive Gauss–Legendre quadrature for smooth complex integrands.

#include <complex>
#include <functional>
#include <vector>

namespace pintersect::detail {

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
  explicit GaussLegendre(int n);
};

const GaussLegendre& gauss_legendre(int n);

struct QuadResult {
  std::complex<double> value;
  double error_estimate;
  long evaluations;
};

/// Integrates f over [a, b] starting from `breaks` (sorted, including a and b)
/// and bisecting any panel whose two-half estimate disagrees by more than tol.
QuadResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, const std::vector<double>& breaks,
                              double abs_tol, double rel_tol, int order = 20, int max_depth = 30);

}  // namespace pintersect::detail
