#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace dfeg {

/// Uniform periodic grid on [z_min, z_max) with its dual wavenumber lattice.
///
/// Sample i sits at z_min + i*dz with dz = (z_max - z_min)/n. Wavenumbers are
/// stored in FFT order: 0, dk, ..., (n/2-1)dk, -n/2 dk, ..., -dk, so the
/// momentum lattice hbar*k spans [-pi*hbar/dz, pi*hbar/dz). Copies share the
/// coordinate tables.
class Grid {
 public:
  Grid(std::size_t n_points, double z_min, double z_max);

  std::size_t size() const { return n_; }
  double z_min() const { return z_min_; }
  double z_max() const { return z_max_; }
  double dz() const { return dz_; }
  double length() const { return z_max_ - z_min_; }
  double dk() const { return dk_; }

  double z(std::size_t i) const { return (*z_)[i]; }
  double k(std::size_t i) const { return (*k_)[i]; }
  const std::vector<double>& positions() const { return *z_; }
  const std::vector<double>& wavenumbers() const { return *k_; }

  /// Index of the sample closest to z (clamped to the grid).
  std::size_t nearest_index(double z) const;

  /// Same size and length with the origin moved by dz_shift.
  Grid shifted(double dz_shift) const;

  bool operator==(const Grid& other) const;

 private:
  std::size_t n_;
  double z_min_;
  double z_max_;
  double dz_;
  double dk_;
  std::shared_ptr<const std::vector<double>> z_;
  std::shared_ptr<const std::vector<double>> k_;
};

void require_same_grid(const Grid& a, const Grid& b);

}  // namespace dfeg
