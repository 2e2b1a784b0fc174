#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace kvlab::detail {
namespace {

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex planner_mutex;

struct Plan {
  int n;
  double* real;
  fftw_complex* spec;
  fftw_plan forward;
  fftw_plan backward;

  explicit Plan(int size) : n(size) {
    std::lock_guard lock(planner_mutex);
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

Plan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<Plan>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

}  // namespace

void spectral_derivative(std::span<const double> in, int order, std::span<double> out) {
  const int n = static_cast<int>(in.size());
  Plan& p = plan_for(n);
  std::copy(in.begin(), in.end(), p.real);
  fftw_execute(p.forward);

  const int half = n / 2;
  for (int k = 0; k <= half; ++k) {
    std::complex<double> c(p.spec[k][0], p.spec[k][1]);
    const double kk = k;
    if (order == 1) {
      c = (k == half) ? 0.0 : c * std::complex<double>(0.0, kk);
    } else {
      c *= -kk * kk;
    }
    p.spec[k][0] = c.real() / n;
    p.spec[k][1] = c.imag() / n;
  }
  fftw_execute(p.backward);
  std::copy(p.real, p.real + n, out.begin());
}

}  // namespace kvlab::detail
