#include "dfeg/core/grid.hpp"

#include <cmath>
#include <string>

#include "dfeg/core/types.hpp"

namespace dfeg {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(std::size_t n_points, double z_min, double z_max)
    : n_(n_points), z_min_(z_min), z_max_(z_max) {
  if (!is_power_of_two(n_points) || n_points < 2) {
    throw ConfigError("grid: n_points must be a power of two >= 2, got " +
                      std::to_string(n_points));
  }
  if (!(z_max > z_min) || !std::isfinite(z_min) || !std::isfinite(z_max)) {
    throw ConfigError("grid: require finite z_min < z_max");
  }
  dz_ = (z_max - z_min) / static_cast<double>(n_);
  dk_ = 2.0 * kPi / (static_cast<double>(n_) * dz_);
  std::vector<double> z(n_), k(n_);
  const auto half = static_cast<long>(n_ / 2);
  for (std::size_t i = 0; i < n_; ++i) {
    z[i] = z_min_ + static_cast<double>(i) * dz_;
    auto m = static_cast<long>(i);
    if (m >= half) m -= static_cast<long>(n_);
    k[i] = static_cast<double>(m) * dk_;
  }
  z_ = std::make_shared<const std::vector<double>>(std::move(z));
  k_ = std::make_shared<const std::vector<double>>(std::move(k));
}

std::size_t Grid::nearest_index(double z) const {
  const double x = std::round((z - z_min_) / dz_);
  if (x <= 0.0) return 0;
  if (x >= static_cast<double>(n_ - 1)) return n_ - 1;
  return static_cast<std::size_t>(x);
}

Grid Grid::shifted(double dz_shift) const {
  return Grid(n_, z_min_ + dz_shift, z_max_ + dz_shift);
}

bool Grid::operator==(const Grid& other) const {
  return n_ == other.n_ && z_min_ == other.z_min_ && z_max_ == other.z_max_;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw DimensionError("operands live on different grids");
  }
}

}  // namespace dfeg
