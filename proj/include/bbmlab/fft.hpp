#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace bbm::detail {

// fftw_plan_* and fftw_destroy_plan are not reentrant; fftw_execute is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Unnormalized in-place DFT. sign = +1 computes sum_k a_k e^{+2 pi i jk/n}.
inline void dft_inplace(std::vector<std::complex<double>>& data, int sign) {
  if (data.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  };
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan.reset(fftw_plan_dft_1d(static_cast<int>(data.size()), p, p,
                                sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
}

/// Full linear convolution c[m] = sum_j a[j] b[m-j], length |a|+|b|-1,
/// computed through a zero-padded FFT.
inline std::vector<std::complex<double>> linear_convolution(std::span<const std::complex<double>> a,
                                                            std::span<const std::complex<double>> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out);
  std::vector<std::complex<double>> fa(n), fb(n);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  dft_inplace(fa, -1);
  dft_inplace(fb, -1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i] * scale;
  dft_inplace(fa, +1);
  fa.resize(out);
  return fa;
}

}  // namespace bbm::detail
