#include "quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pintersect::detail {

GaussLegendre::GaussLegendre(int n) : nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n)) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    nodes[static_cast<std::size_t>(i)] = static_cast<double>(x);
    weights[static_cast<std::size_t>(i)] = static_cast<double>(2 / ((1 - x * x) * dp * dp));
  }
}

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

namespace {

std::complex<double> panel(const std::function<std::complex<double>(double)>& f, const GaussLegendre& gl, double a,
                           double b, long& evals) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  std::complex<double> acc = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
  evals += static_cast<long>(gl.nodes.size());
  return acc * half;
}

std::complex<double> refine(const std::function<std::complex<double>(double)>& f, const GaussLegendre& gl, double a,
                            double b, std::complex<double> whole, double tol, int depth, double& err, long& evals) {
  const double m = 0.5 * (a + b);
  const auto left = panel(f, gl, a, m, evals);
  const auto right = panel(f, gl, m, b, evals);
  const double diff = std::abs(left + right - whole);
  if (diff <= tol || depth <= 0) {
    err += diff;
    return left + right;
  }
  return refine(f, gl, a, m, left, tol / 2, depth - 1, err, evals) +
         refine(f, gl, m, b, right, tol / 2, depth - 1, err, evals);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, const std::vector<double>& breaks,
                              double abs_tol, double rel_tol, int order, int max_depth) {
  if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
  const auto& gl = gauss_legendre(order);
  QuadResult res{0, 0, 0};
  // First pass gives a scale for the relative tolerance.
  std::vector<std::complex<double>> coarse(breaks.size() - 1);
  double scale = 0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    coarse[i] = panel(f, gl, breaks[i], breaks[i + 1], res.evaluations);
    scale += std::abs(coarse[i]);
  }
  const double tol = std::max(abs_tol, rel_tol * scale);
  const double per_panel = tol / static_cast<double>(coarse.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    res.value += refine(f, gl, breaks[i], breaks[i + 1], coarse[i], per_panel, max_depth, res.error_estimate,
                        res.evaluations);
  return res;
}

}  // namespace pintersect::detail
