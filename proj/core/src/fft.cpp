#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace pintersect::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : p_(p) {
    if (p_ == nullptr) throw std::runtime_error("fftw: plan creation failed");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p_);
  }
  void execute() const { fftw_execute(p_); }

 private:
  fftw_plan p_;
};

}  // namespace

std::vector<cplx> dft_real_forward(const std::vector<double>& a, std::size_t n) {
  if (n == 0) return {};
  if (a.size() > n) throw std::invalid_argument("dft_real_forward: input longer than transform");
  auto in = fftw_buffer<double>(n);
  auto out = fftw_buffer<fftw_complex>(n / 2 + 1);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));
  }
  std::fill(in.get(), in.get() + n, 0.0);
  std::copy(a.begin(), a.end(), in.get());
  plan->execute();
  std::vector<cplx> res(n);
  for (std::size_t t = 0; t <= n / 2; ++t) res[t] = {out[t][0], out[t][1]};
  for (std::size_t t = n / 2 + 1; t < n; ++t) res[t] = std::conj(res[n - t]);
  return res;
}

std::vector<cplx> dft_backward(const std::vector<cplx>& a) {
  const std::size_t n = a.size();
  if (n == 0) return {};
  auto buf = fftw_buffer<fftw_complex>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = a[i].real();
    buf[i][1] = a[i].imag();
  }
  plan->execute();
  std::vector<cplx> res(n);
  for (std::size_t i = 0; i < n; ++i) res[i] = {buf[i][0], buf[i][1]};
  return res;
}

std::vector<double> autocorrelation(const std::vector<double>& a, std::size_t n) {
  if (n == 0) return {};
  if (a.size() > n) throw std::invalid_argument("autocorrelation: input longer than transform");
  auto in = fftw_buffer<double>(n);
  auto freq = fftw_buffer<fftw_complex>(n / 2 + 1);
  std::unique_ptr<Plan> fwd, inv;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), freq.get(), FFTW_ESTIMATE));
    inv = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(static_cast<int>(n), freq.get(), in.get(), FFTW_ESTIMATE));
  }
  std::fill(in.get(), in.get() + n, 0.0);
  std::copy(a.begin(), a.end(), in.get());
  fwd->execute();
  // |A|^2 gives Σ_x a[x] a[x+g] after the inverse transform (real input, so conj symmetry).
  for (std::size_t t = 0; t <= n / 2; ++t) {
    const double re = freq[t][0], im = freq[t][1];
    freq[t][0] = re * re + im * im;
    freq[t][1] = 0.0;
  }
  inv->execute();
  std::vector<double> c(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t g = 0; g < n; ++g) c[g] = in[g] * scale;
  return c;
}

}  // namespace pintersect::detail
