#pragma once

#include <cstddef>
#include <span>

#include "dfeg/core/types.hpp"

// Hot loops of the propagators. `serial` is the reference implementation;
// `omp` has the same signatures and must agree with it to rounding (the
// reductions sum in a different order). Spinor buffers are component-major,
// length 4n.

namespace dfeg::kernels {

/// Per-mode coefficients of exp(-i H(p) dt/hbar) with H = c alpha3 p + beta M c^2:
/// block (0,2) = [[d_up, off], [off, d_lo]], block (1,3) = [[d_up, -off], [-off, d_lo]].
struct KineticMode {
  cplx d_up;
  cplx d_lo;
  cplx off;
};

namespace serial {

/// Upper components times phase[i], lower components times conj(phase[i]).
void potential_phase(std::span<cplx> psi, std::span<const cplx> phase);

/// Applies the 2x2 block propagators mode by mode to a momentum-space spinor.
void kinetic_modes(std::span<cplx> psi_hat, std::span<const KineticMode> modes);

/// sum |v|^2.
double norm_sq(std::span<const cplx> v);

/// out_ij = (a_i conj(b_j) + c_i + e_j) rho_ij for a column-major d x d
/// matrix. Covers every superoperator that is diagonal in the position basis
/// (jump-operator dissipators, commutators with diagonal potentials).
void separable_superop(const cplx* rho, cplx* out, std::size_t d, std::span<const cplx> a,
                       std::span<const cplx> b, std::span<const cplx> c,
                       std::span<const cplx> e);

/// Applies H(p) = c alpha3 p + beta m c^2 in momentum space to `cols`
/// column vectors of length 4n stored contiguously (column-major), in place.
/// cp[k] = c hbar k_k; the caller transforms to and from momentum space.
void hamiltonian_modes(cplx* data, std::size_t n, std::size_t cols, std::span<const double> cp,
                       double mc2);

/// Transforms every component of `cols` length-4n columns forward (sign=-1)
/// or backward (sign=+1, including 1/n).
void fft_columns(cplx* data, std::size_t n, std::size_t cols, int sign);

}  // namespace serial

namespace omp {

void potential_phase(std::span<cplx> psi, std::span<const cplx> phase);
void kinetic_modes(std::span<cplx> psi_hat, std::span<const KineticMode> modes);
double norm_sq(std::span<const cplx> v);
void separable_superop(const cplx* rho, cplx* out, std::size_t d, std::span<const cplx> a,
                       std::span<const cplx> b, std::span<const cplx> c,
                       std::span<const cplx> e);
void hamiltonian_modes(cplx* data, std::size_t n, std::size_t cols, std::span<const double> cp,
                       double mc2);
void fft_columns(cplx* data, std::size_t n, std::size_t cols, int sign);

}  // namespace omp

/// Number of OpenMP threads in use (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace dfeg::kernels
