#include "dfeg/core/gamma.hpp"

#include <stdexcept>

#include "dfeg/core/types.hpp"

namespace dfeg {

namespace {

using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;

M4 blocks(const M2& a, const M2& b, const M2& c, const M2& d) {
  M4 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

GammaSet build_gamma_set() {
  const M2 id = M2::Identity();
  const M2 zero = M2::Zero();
  M2 s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -kI, kI, 0;
  s3 << 1, 0, 0, -1;

  GammaSet g;
  g.gamma0 = blocks(id, zero, zero, -id);
  g.gamma1 = blocks(zero, s1, -s1, zero);
  g.gamma2 = blocks(zero, s2, -s2, zero);
  g.gamma3 = blocks(zero, s3, -s3, zero);
  g.gamma5 = kI * g.gamma0 * g.gamma1 * g.gamma2 * g.gamma3;
  g.beta = g.gamma0;
  g.alpha1 = g.gamma0 * g.gamma1;
  g.alpha2 = g.gamma0 * g.gamma2;
  g.alpha3 = g.gamma0 * g.gamma3;
  g.Sigma1 = blocks(s1, zero, zero, s1);
  g.Sigma2 = blocks(s2, zero, zero, s2);
  g.Sigma3 = blocks(s3, zero, zero, s3);
  return g;
}

const GammaSet& gammas() {
  static const GammaSet instance = build_gamma_set();
  return instance;
}

const Eigen::Matrix4cd& GammaSet::gamma(int mu) const {
  switch (mu) {
    case 0: return gamma0;
    case 1: return gamma1;
    case 2: return gamma2;
    case 3: return gamma3;
    case 5: return gamma5;
    default: throw std::out_of_range("gamma index");
  }
}

const Eigen::Matrix4cd& GammaSet::alpha(int i) const {
  switch (i) {
    case 1: return alpha1;
    case 2: return alpha2;
    case 3: return alpha3;
    default: throw std::out_of_range("alpha index");
  }
}

const Eigen::Matrix4cd& GammaSet::Sigma(int i) const {
  switch (i) {
    case 1: return Sigma1;
    case 2: return Sigma2;
    case 3: return Sigma3;
    default: throw std::out_of_range("Sigma index");
  }
}

Eigen::Matrix4cd GammaSet::spin(int i, double hbar) const { return 0.5 * hbar * Sigma(i); }

double eta(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

}  // namespace dfeg
