// Serial reference vs OpenMP Crank-Nicolson residual, plus the preconditioner solve.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "vpfp/fourier_preconditioner.hpp"
#include "vpfp/kernels.hpp"

using namespace vpfp;

namespace {

struct Setup {
  DGMesh mesh;
  int nh;
  DGFunction n_i;
  std::vector<double> y, a, out;
  std::vector<char> mask;
  CnParams prm;

  Setup(int nc, int nh_) : mesh(nc, 12.0), nh(nh_), n_i(mesh) {
    n_i = project(mesh, [](double x) { return 1.0 + 0.1 * std::cos(2 * M_PI * x / 12.0); });
    const std::size_t n = static_cast<std::size_t>(nh) * mesh.n_dofs();
    y.resize(n);
    out.resize(n);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1e-2, 1e-2);
    for (auto& v : y) v = U(rng);
    for (int i = 0; i < mesh.n_dofs(); ++i) y[i] = n_i.coeffs[i];
    a = y;
    mask.assign(nh, 1);
    prm.dt = 0.002;
    prm.v_th = 1.2;
    prm.delta = 1.2 * std::sqrt(double(nh));
    prm.nu_ee = 0.5;
    prm.nu_ei = 0.1;
    prm.ion_T = 1.0;
  }
};

void BM_residual_serial(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  LdgPoisson poisson(s.mesh, 1.0);
  for (auto _ : state) {
    serial_cn_residual(s.mesh, poisson, s.n_i, s.nh, s.y, s.a, s.mask, s.prm, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

void BM_residual_parallel(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  CnResidual r(s.mesh, s.nh, s.n_i, 1.0);
  for (auto _ : state) {
    r.evaluate(s.y, s.a, s.mask, s.prm, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

void BM_preconditioner_apply(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  FourierPreconditioner P(s.mesh, s.nh);
  P.factor({1000.0, 0.6, 1.2, s.prm.delta}, s.mask);
  for (auto _ : state) {
    P.apply(s.y, s.out);
    benchmark::DoNotOptimize(s.out.data());
  }
}

}  // namespace

BENCHMARK(BM_residual_serial)->Args({32, 32})->Args({32, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_residual_parallel)->Args({32, 32})->Args({32, 64})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_preconditioner_apply)->Args({32, 32})->Args({32, 64})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
