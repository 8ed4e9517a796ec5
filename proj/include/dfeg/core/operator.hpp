#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "dfeg/core/density.hpp"
#include "dfeg/core/spinor.hpp"

namespace dfeg {

/// Observable descriptor: a linear combination of products of spin matrices,
/// powers of z and powers of p. In a product the rightmost factor acts first.
/// Momentum powers are applied spectrally.
class Operator {
 public:
  enum class Kind { spin, position, momentum };
  struct Factor {
    Kind kind;
    Eigen::Matrix4cd spin;
    int power;
  };
  struct Term {
    cplx coeff;
    std::vector<Factor> factors;
  };

  static Operator identity();
  static Operator spin(const Eigen::Matrix4cd& m);
  static Operator position(int power = 1);
  static Operator momentum(int power = 1);

  Operator operator*(const Operator& rhs) const;
  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  friend Operator operator*(cplx a, const Operator& op);

  Operator adjoint() const;

  /// out = O in for a component-major vector of length 4n.
  void apply(std::span<const cplx> in, std::span<cplx> out, const Grid& grid,
             double hbar) const;
  SpinorField apply(const SpinorField& psi, double hbar) const;
  /// Dense (4n)x(4n) matrix.
  Eigen::MatrixXcd dense(const Grid& grid, double hbar) const;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
};

/// <psi|O|psi> = sum dz psi^dagger (O psi).
cplx expectation(const SpinorField& psi, const Operator& op, double hbar = 1.0);
/// Tr[O rho].
cplx expectation(const DensityMatrix& rho, const Operator& op, double hbar = 1.0);

}  // namespace dfeg
