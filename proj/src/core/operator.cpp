#include "dfeg/core/operator.hpp"

#include <cmath>

#include "dfeg/core/fft.hpp"

namespace dfeg {

namespace {

using Buffer = std::vector<cplx>;

void apply_factor(const Operator::Factor& f, Buffer& v, const Grid& grid, double hbar) {
  const std::size_t n = grid.size();
  switch (f.kind) {
    case Operator::Kind::spin: {
      Buffer out(v.size(), cplx{});
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
          const cplx m = f.spin(r, c);
          if (m == cplx{}) continue;
          cplx* o = out.data() + static_cast<std::size_t>(r) * n;
          const cplx* x = v.data() + static_cast<std::size_t>(c) * n;
          for (std::size_t i = 0; i < n; ++i) o[i] += m * x[i];
        }
      }
      v.swap(out);
      break;
    }
    case Operator::Kind::position: {
      for (int c = 0; c < 4; ++c) {
        cplx* x = v.data() + static_cast<std::size_t>(c) * n;
        for (std::size_t i = 0; i < n; ++i) x[i] *= std::pow(grid.z(i), f.power);
      }
      break;
    }
    case Operator::Kind::momentum: {
      const auto plan = FftPlan::get(n);
      for (int c = 0; c < 4; ++c) {
        cplx* x = v.data() + static_cast<std::size_t>(c) * n;
        plan->forward(x);
        for (std::size_t i = 0; i < n; ++i) x[i] *= std::pow(hbar * grid.k(i), f.power);
        plan->backward(x);
      }
      break;
    }
  }
}

}  // namespace

Operator Operator::identity() {
  Operator op;
  op.terms_.push_back({cplx{1.0, 0.0}, {}});
  return op;
}

Operator Operator::spin(const Eigen::Matrix4cd& m) {
  Operator op;
  op.terms_.push_back({cplx{1.0, 0.0}, {Factor{Kind::spin, m, 1}}});
  return op;
}

Operator Operator::position(int power) {
  Operator op;
  op.terms_.push_back({cplx{1.0, 0.0}, {Factor{Kind::position, Eigen::Matrix4cd::Identity(), power}}});
  return op;
}

Operator Operator::momentum(int power) {
  Operator op;
  op.terms_.push_back({cplx{1.0, 0.0}, {Factor{Kind::momentum, Eigen::Matrix4cd::Identity(), power}}});
  return op;
}

Operator Operator::operator*(const Operator& rhs) const {
  Operator out;
  for (const Term& a : terms_) {
    for (const Term& b : rhs.terms_) {
      Term t{a.coeff * b.coeff, a.factors};
      t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

Operator Operator::operator+(const Operator& rhs) const {
  Operator out = *this;
  out.terms_.insert(out.terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return out;
}

Operator Operator::operator-(const Operator& rhs) const { return *this + cplx{-1.0, 0.0} * rhs; }

Operator operator*(cplx a, const Operator& op) {
  Operator out = op;
  for (auto& t : out.terms_) t.coeff *= a;
  return out;
}

Operator Operator::adjoint() const {
  Operator out;
  for (const Term& t : terms_) {
    Term a{std::conj(t.coeff), {}};
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
      Factor f = *it;
      if (f.kind == Kind::spin) f.spin = f.spin.adjoint().eval();
      a.factors.push_back(f);
    }
    out.terms_.push_back(std::move(a));
  }
  return out;
}

void Operator::apply(std::span<const cplx> in, std::span<cplx> out, const Grid& grid,
                     double hbar) const {
  const std::size_t d = 4 * grid.size();
  if (in.size() != d || out.size() != d) throw DimensionError("operator: vector length != 4N");
  Buffer acc(d, cplx{});
  Buffer work;
  for (const Term& t : terms_) {
    work.assign(in.begin(), in.end());
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) apply_factor(*it, work, grid, hbar);
    for (std::size_t i = 0; i < d; ++i) acc[i] += t.coeff * work[i];
  }
  std::copy(acc.begin(), acc.end(), out.begin());
}

SpinorField Operator::apply(const SpinorField& psi, double hbar) const {
  SpinorField out(psi.grid());
  apply(psi.values(), out.values(), psi.grid(), hbar);
  return out;
}

Eigen::MatrixXcd Operator::dense(const Grid& grid, double hbar) const {
  const auto d = static_cast<Eigen::Index>(4 * grid.size());
  Eigen::MatrixXcd m(d, d);
  Buffer e(static_cast<std::size_t>(d)), col(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    std::fill(e.begin(), e.end(), cplx{});
    e[static_cast<std::size_t>(j)] = 1.0;
    apply(e, col, grid, hbar);
    for (Eigen::Index i = 0; i < d; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
  }
  return m;
}

cplx expectation(const SpinorField& psi, const Operator& op, double hbar) {
  const SpinorField o = op.apply(psi, hbar);
  return psi.inner(o);
}

cplx expectation(const DensityMatrix& rho, const Operator& op, double hbar) {
  const std::size_t d = rho.dim();
  std::vector<cplx> col(d), out(d);
  cplx tr{};
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      col[i] = rho.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    op.apply(col, out, rho.grid(), hbar);
    tr += out[j];
  }
  return tr;
}

}  // namespace dfeg
