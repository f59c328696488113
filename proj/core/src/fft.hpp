#pragma once

// Thin FFTW wrappers. Plan creation is serialised; execution is not.

#include <complex>
#include <cstddef>
#include <vector>

namespace pintersect::detail {

using cplx = std::complex<double>;

/// X[t] = Σ_x a[x] e^{-2πi x t / n} for t in [0, n); `a` is zero-padded to n.
std::vector<cplx> dft_real_forward(const std::vector<double>& a, std::size_t n);

/// y[t] = Σ_x a[x] e^{+2πi x t / n}, complex input of length n.
std::vector<cplx> dft_backward(const std::vector<cplx>& a);

/// c[g] = Σ_x a[x] a[x + g] for g in [0, n); exact (no wrap) when n >= 2·a.size().
std::vector<double> autocorrelation(const std::vector<double>& a, std::size_t n);

}  // namespace pintersect::detail
