#include "dfeg/core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace dfeg {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  std::vector<cplx> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, flags);
  bwd_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, flags);
  if (fwd_ == nullptr || bwd_ == nullptr) {
    throw NumericalError("fftw plan creation failed");
  }
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

std::shared_ptr<const FftPlan> FftPlan::get(std::size_t n) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const FftPlan> plan(new FftPlan(n));
  cache.emplace(n, plan);
  return plan;
}

void FftPlan::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void FftPlan::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
  const double s = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) data[i] *= s;
}

}  // namespace dfeg
