// Serial reference kernels against their OpenMP counterparts, plus a whole
// Strang step in both execution modes. Run with --benchmark_filter to narrow.

#include <benchmark/benchmark.h>

#include <vector>

#include "dfeg/core/packet.hpp"
#include "dfeg/core/rng.hpp"
#include "dfeg/dynamics/dirac.hpp"
#include "dfeg/kernels/kernels.hpp"

using namespace dfeg;

namespace {

std::vector<cplx> random_buffer(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<cplx> v(n);
  for (cplx& x : v) x = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  return v;
}

template <void (*F)(std::span<cplx>, std::span<const cplx>)>
void BM_potential_phase(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto psi = random_buffer(4 * n, 1);
  const auto phase = random_buffer(n, 2);
  for (auto _ : state) {
    F(psi, phase);
    benchmark::DoNotOptimize(psi.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * n));
}

template <void (*F)(std::span<cplx>, std::span<const kernels::KineticMode>)>
void BM_kinetic_modes(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto psi = random_buffer(4 * n, 3);
  const auto r = random_buffer(3 * n, 4);
  std::vector<kernels::KineticMode> modes(n);
  for (std::size_t k = 0; k < n; ++k) modes[k] = {r[3 * k], r[3 * k + 1], r[3 * k + 2]};
  for (auto _ : state) {
    F(psi, modes);
    benchmark::DoNotOptimize(psi.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * n));
}

template <double (*F)(std::span<const cplx>)>
void BM_norm_sq(benchmark::State& state) {
  const auto psi = random_buffer(4 * static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(F(psi));
}

template <void (*F)(const cplx*, cplx*, std::size_t, std::span<const cplx>, std::span<const cplx>,
                    std::span<const cplx>, std::span<const cplx>)>
void BM_separable_superop(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto rho = random_buffer(d * d, 6);
  const auto a = random_buffer(d, 7), b = random_buffer(d, 8), c = random_buffer(d, 9),
             e = random_buffer(d, 10);
  std::vector<cplx> out(d * d);
  for (auto _ : state) {
    F(rho.data(), out.data(), d, a, b, c, e);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d * d));
}

template <void (*F)(cplx*, std::size_t, std::size_t, int)>
void BM_fft_columns(benchmark::State& state) {
  const std::size_t n = 128;
  const auto cols = static_cast<std::size_t>(state.range(0));
  auto data = random_buffer(4 * n * cols, 11);
  for (auto _ : state) {
    F(data.data(), n, cols, -1);
    F(data.data(), n, cols, +1);
    benchmark::DoNotOptimize(data.data());
  }
}

void BM_strang_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto exec = state.range(1) == 0 ? Execution::serial : Execution::parallel;
  HamiltonianConfig cfg;
  const Grid grid(n, -10.0, 30.0);
  const SpinorField psi = make_gaussian_packet(grid, 2.0, 0.0, 0.5);
  StrangStepper stepper(grid, cfg, 0.01, exec);
  std::vector<cplx> buf = psi.storage();
  double t = 0.0;
  for (auto _ : state) {
    stepper.step(buf, t);
    t += 0.01;
  }
  state.SetLabel(exec == Execution::serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_potential_phase<kernels::serial::potential_phase>)->Name("potential_phase/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_potential_phase<kernels::omp::potential_phase>)->Name("potential_phase/omp")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_kinetic_modes<kernels::serial::kinetic_modes>)->Name("kinetic_modes/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_kinetic_modes<kernels::omp::kinetic_modes>)->Name("kinetic_modes/omp")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_norm_sq<kernels::serial::norm_sq>)->Name("norm_sq/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_norm_sq<kernels::omp::norm_sq>)->Name("norm_sq/omp")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_separable_superop<kernels::serial::separable_superop>)->Name("separable_superop/serial")->Arg(256)->Arg(512);
BENCHMARK(BM_separable_superop<kernels::omp::separable_superop>)->Name("separable_superop/omp")->Arg(256)->Arg(512);
BENCHMARK(BM_fft_columns<kernels::serial::fft_columns>)->Name("fft_columns/serial")->Arg(64)->Arg(512);
BENCHMARK(BM_fft_columns<kernels::omp::fft_columns>)->Name("fft_columns/omp")->Arg(64)->Arg(512);
BENCHMARK(BM_strang_step)->Args({8192, 0})->Args({8192, 1})->Args({65536, 0})->Args({65536, 1});

BENCHMARK_MAIN();
