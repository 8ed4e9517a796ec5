#pragma once

#include <span>
#include <vector>

#include "dfeg/core/grid.hpp"
#include "dfeg/core/types.hpp"

namespace dfeg {

/// Four-component spinor sampled on a grid, stored component-major: the
/// amplitude of component c at sample i lives at index c*n + i.
class SpinorField {
 public:
  static constexpr int kComponents = 4;

  explicit SpinorField(Grid grid);
  SpinorField(Grid grid, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  std::size_t points() const { return grid_.size(); }

  cplx& at(int c, std::size_t i) { return values_[static_cast<std::size_t>(c) * points() + i]; }
  cplx at(int c, std::size_t i) const {
    return values_[static_cast<std::size_t>(c) * points() + i];
  }

  std::span<cplx> component(int c);
  std::span<const cplx> component(int c) const;
  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  const std::vector<cplx>& storage() const { return values_; }

  /// sum_i dz psi^dagger psi.
  double norm() const;
  SpinorField normalized() const;
  /// sum_i dz psi^dagger other.
  cplx inner(const SpinorField& other) const;
  /// sqrt(sum_i dz |psi - other|^2).
  double l2_distance(const SpinorField& other) const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

}  // namespace dfeg
