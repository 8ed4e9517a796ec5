#pragma once

#include <Eigen/Dense>

#include "dfeg/core/grid.hpp"
#include "dfeg/core/spinor.hpp"

namespace dfeg {

/// Density matrix over grid x spinor indices, same index order as SpinorField
/// (I = c*n + i). Entries use the discrete normalization Tr rho = 1, i.e. a
/// pure state is v v^dagger with v = sqrt(dz) psi.
class DensityMatrix {
 public:
  DensityMatrix(Grid grid, Eigen::MatrixXcd values);

  static DensityMatrix from_pure(const SpinorField& psi);
  /// sum_k w_k |psi_k><psi_k| with each psi_k normalized first.
  static DensityMatrix mixture(const std::vector<SpinorField>& states,
                               const std::vector<double>& weights);
  static DensityMatrix maximally_mixed(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::size_t dim() const { return static_cast<std::size_t>(values_.rows()); }
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }

  cplx trace() const { return values_.trace(); }
  /// max |rho - rho^dagger| entrywise.
  double hermiticity_error() const;
  void hermitize();
  double min_eigenvalue() const;
  Eigen::VectorXd eigenvalues() const;

 private:
  Grid grid_;
  Eigen::MatrixXcd values_;
};

/// Tr[rho^2] assuming a Hermitian rho (sum of |rho_ij|^2).
double purity(const DensityMatrix& rho);

/// (1/2) sum |eig(a - b)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace dfeg
