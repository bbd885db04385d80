#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace stepflow::fft {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// FFTW planning is not thread-safe; execution through the new-array API is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  const PlanPair& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    const std::size_t nr = static_cast<std::size_t>(n) * n;
    const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    PlanPair p;
    p.r2c = fftw_plan_dft_r2c_2d(n, n, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.c2r = fftw_plan_dft_c2r_2d(n, n, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(r);
    fftw_free(c);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const double> values, int n) {
  const auto& plan = cache().get(n);
  std::vector<double> in(values.begin(), values.end());
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * (n / 2 + 1));
  fftw_execute_dft_r2c(plan.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (auto& z : out) z *= scale;
  return out;
}

std::vector<double> inverse(std::span<const std::complex<double>> coeffs, int n) {
  const auto& plan = cache().get(n);
  // c2r overwrites its input.
  std::vector<std::complex<double>> in(coeffs.begin(), coeffs.end());
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  fftw_execute_dft_c2r(plan.c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

}  // namespace stepflow::fft
