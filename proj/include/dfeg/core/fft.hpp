#pragma once

#include <cstddef>
#include <memory>

#include "dfeg/core/types.hpp"

namespace dfeg {

/// In-place complex FFT of fixed length backed by FFTW.
///
/// Plans are created once per length under a lock and never mutated, so one
/// plan may be executed from several threads at once.
class FftPlan {
 public:
  static std::shared_ptr<const FftPlan> get(std::size_t n);

  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::size_t size() const { return n_; }
  /// Unnormalized forward transform: X_k = sum_j x_j exp(-2 pi i jk/n).
  void forward(cplx* data) const;
  /// Inverse transform including the 1/n factor.
  void backward(cplx* data) const;

 private:
  explicit FftPlan(std::size_t n);
  std::size_t n_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace dfeg
