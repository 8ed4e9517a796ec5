#include "dfeg/core/density.hpp"

#include <cmath>

namespace dfeg {

DensityMatrix::DensityMatrix(Grid grid, Eigen::MatrixXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  const auto d = static_cast<Eigen::Index>(SpinorField::kComponents * grid_.size());
  if (values_.rows() != d || values_.cols() != d) {
    throw DimensionError("density matrix: shape does not match 4N");
  }
}

DensityMatrix DensityMatrix::from_pure(const SpinorField& psi) {
  const SpinorField n = psi.normalized();
  const double s = std::sqrt(n.grid().dz());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n.storage().size()));
  for (std::size_t i = 0; i < n.storage().size(); ++i) v[static_cast<Eigen::Index>(i)] = s * n.storage()[i];
  return DensityMatrix(n.grid(), v * v.adjoint());
}

DensityMatrix DensityMatrix::mixture(const std::vector<SpinorField>& states,
                                     const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) {
    throw DimensionError("mixture: need one weight per state");
  }
  DensityMatrix rho = from_pure(states[0]);
  rho.values_ *= weights[0];
  for (std::size_t k = 1; k < states.size(); ++k) {
    require_same_grid(rho.grid_, states[k].grid());
    rho.values_ += weights[k] * from_pure(states[k]).values_;
  }
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(const Grid& grid) {
  const auto d = static_cast<Eigen::Index>(SpinorField::kComponents * grid.size());
  return DensityMatrix(grid, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::hermiticity_error() const {
  return (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
}

void DensityMatrix::hermitize() {
  Eigen::MatrixXcd h = 0.5 * (values_ + values_.adjoint());
  values_ = std::move(h);
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(values_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double DensityMatrix::min_eigenvalue() const { return eigenvalues().minCoeff(); }

double purity(const DensityMatrix& rho) { return rho.values().squaredNorm(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_grid(a.grid(), b.grid());
  Eigen::MatrixXcd d = a.values() - b.values();
  d = 0.5 * (d + d.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace dfeg
