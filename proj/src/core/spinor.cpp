#include "dfeg/core/spinor.hpp"

#include <cmath>
#include <string>

namespace dfeg {

SpinorField::SpinorField(Grid grid)
    : grid_(std::move(grid)), values_(kComponents * grid_.size(), cplx{}) {}

SpinorField::SpinorField(Grid grid, std::vector<cplx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != kComponents * grid_.size()) {
    throw DimensionError("spinor: expected " + std::to_string(kComponents * grid_.size()) +
                         " amplitudes, got " + std::to_string(values_.size()));
  }
}

std::span<cplx> SpinorField::component(int c) {
  return {values_.data() + static_cast<std::size_t>(c) * points(), points()};
}

std::span<const cplx> SpinorField::component(int c) const {
  return {values_.data() + static_cast<std::size_t>(c) * points(), points()};
}

double SpinorField::norm() const {
  double s = 0.0;
  for (const cplx& v : values_) s += std::norm(v);
  return s * grid_.dz();
}

SpinorField SpinorField::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw NumericalError("spinor: cannot normalize a zero state");
  SpinorField out = *this;
  const double s = 1.0 / std::sqrt(n);
  for (cplx& v : out.values_) v *= s;
  return out;
}

cplx SpinorField::inner(const SpinorField& other) const {
  require_same_grid(grid_, other.grid_);
  cplx s{};
  for (std::size_t i = 0; i < values_.size(); ++i) s += std::conj(values_[i]) * other.values_[i];
  return s * grid_.dz();
}

double SpinorField::l2_distance(const SpinorField& other) const {
  require_same_grid(grid_, other.grid_);
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += std::norm(values_[i] - other.values_[i]);
  return std::sqrt(s * grid_.dz());
}

bool SpinorField::all_finite() const {
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace dfeg
