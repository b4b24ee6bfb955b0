#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vpfp/collisions.hpp"
#include "vpfp/errors.hpp"

using namespace vpfp;

namespace {
const double kPi = std::numbers::pi;

template <class F>
double brute_integral(F f, double a, double b, int n = 40000) {
  double h = (b - a) / n, s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

double series(const HermiteBasis& b, const std::vector<double>& a, double v) {
  std::vector<double> psi(a.size());
  b.psi_all(v, psi);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * psi[k];
  return s;
}
}  // namespace

TEST_CASE("moments from the first three coefficients") {
  auto m = moments_from_coefficients(HermiteBasis(3, 1.0), 2.0, 0.0, 0.0);
  CHECK(m.n == 2.0);
  CHECK(m.u == 0.0);
  CHECK(m.T == 1.0);
  m = moments_from_coefficients(HermiteBasis(3, 2.0), 1.0, 0.5, 0.0);
  CHECK(m.u == doctest::Approx(1.0));
  CHECK(m.T == doctest::Approx(3.0));
  m = moments_from_coefficients(HermiteBasis(3, 1.0), 1.0, 0.0, 1.0 / std::sqrt(2.0));
  CHECK(m.T == doctest::Approx(2.0));
  CHECK_THROWS_AS(moments_from_coefficients(HermiteBasis(3, 1.0), 0.0, 0.1, 0.0), Error);

  // against velocity integrals of the reconstructed distribution
  HermiteBasis b(3, 1.4);
  std::vector<double> a{1.3, 0.2, -0.15};
  m = moments_from_coefficients(b, a[0], a[1], a[2]);
  double n = brute_integral([&](double v) { return series(b, a, v); }, -30, 30);
  double nu = brute_integral([&](double v) { return v * series(b, a, v); }, -30, 30);
  double e2 = brute_integral([&](double v) { return v * v * series(b, a, v); }, -30, 30);
  CHECK(m.n == doctest::Approx(n).epsilon(1e-12));
  CHECK(m.u == doctest::Approx(nu / n).epsilon(1e-12));
  CHECK(m.T == doctest::Approx(e2 / n - (nu / n) * (nu / n)).epsilon(1e-12));
  CHECK(m.w == doctest::Approx(0.5 * e2).epsilon(1e-12));
  CHECK(m.w == doctest::Approx(0.5 * m.n * m.T + 0.5 * m.n * m.u * m.u).epsilon(1e-12));
}

TEST_CASE("mixed quantities") {
  auto e = maxwellian_moments(1.0, 0.0, 1.0);
  auto mix = mixed_quantities(e, maxwellian_moments(1.0, 0.0, 1.0), 1.0);
  CHECK(mix.u_ei == 0.0);
  CHECK(mix.T_ei == 1.0);
  mix = mixed_quantities(maxwellian_moments(1.0, 1.0, 1.0), maxwellian_moments(1.0, 0.0, 0.0), 0.0);
  CHECK(mix.u_ei == 0.5);
  CHECK(mix.T_ei == 1.5);
  mix = mixed_quantities(maxwellian_moments(1.0, 1.0, 2.0), maxwellian_moments(1.0, -1.0, 1.0), 1.0);
  CHECK(mix.u_ei == 0.0);
  CHECK(mix.T_ei == doctest::Approx(2.5));
  auto a = maxwellian_moments(1.0, 0.3, 1.7), c = maxwellian_moments(2.0, -0.4, 0.6);
  CHECK(mixed_quantities(a, c, 1.0).T_ei == doctest::Approx(mixed_quantities(c, a, 1.0).T_ei));
  CHECK(std::abs(mixed_quantities(a, c, 0.0).T_ei - a.T - 0.5 * a.u * a.u) < 1e-15);
}

TEST_CASE("collision source examples and conservation") {
  HermiteBasis b(12, 1.3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  double worst0 = 0.0, worst1 = 0.0, worst2 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(12);
    for (auto& x : a) x = U(rng);
    a[0] = 1.0 + std::abs(U(rng));
    auto m = moments_from_coefficients(b, a[0], a[1], a[2]);
    MixedQuantities mix;
    mix.nu_ee = 0.7;
    worst0 = std::max(worst0, std::abs(collision_source(b, a, mix, m, 0)));
    worst1 = std::max(worst1, std::abs(collision_source(b, a, mix, m, 1)));
    worst2 = std::max(worst2, std::abs(collision_source(b, a, mix, m, 2)));
  }
  CHECK(worst0 == 0.0);
  CHECK(worst1 < 1e-12);
  CHECK(worst2 < 1e-12);

  // Maxwellian at the scaling temperature is annihilated
  std::vector<double> eq(12, 0.0);
  eq[0] = 2.0;
  auto m = moments_from_coefficients(b, 2.0, 0.0, 0.0);
  MixedQuantities mix = mixed_quantities(m, maxwellian_moments(1.0, 0.0, 1.69), 1.0, 0.5, 0.1);
  for (int k = 0; k < 12; ++k) CHECK(std::abs(collision_source(b, eq, mix, m, k)) < 1e-15);
}

TEST_CASE("collision source matches the projected Fokker-Planck operator") {
  const double vth = 1.3;
  HermiteBasis b(10, vth);
  std::vector<double> a{1.0, 0.1, -0.05, 0.03, 0.02, -0.01, 0.004, 0.0, 0.001, 0.0};
  const double u = 0.25, T = 1.1, nu = 0.6;
  auto f = [&](double v) { return series(b, a, v); };
  const double h = 1e-3;
  auto Qf = [&](double v) {
    double f0 = f(v), fp = (f(v + h) - f(v - h)) / (2 * h), fpp = (f(v + h) - 2 * f0 + f(v - h)) / (h * h);
    return nu * (f0 + (v - u) * fp + T * fpp);
  };
  MomentSet m{1.0, u, T, 0.0};
  MixedQuantities ee{0.0, 0.0, 1.0, nu, 0.0};
  MixedQuantities ei{u, T, 1.0, 0.0, nu};
  for (int k = 0; k < 10; ++k) {
    double ck = brute_integral([&](double v) { return Qf(v) * eval_probabilist_hermite(k, v / vth); }, -25, 25);
    CHECK(std::abs(ck + collision_source(b, a, ee, m, k)) < 1e-6);
    CHECK(std::abs(ck + collision_source(b, a, ei, MomentSet{1.0, 0.0, 0.0, 0.0}, k)) < 1e-6);
  }
}

TEST_CASE("inertial source") {
  HermiteBasis b(6, 1.0);
  std::vector<double> a{3.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  CHECK(inertial_source(b, 0.1, a, 0) == 0.0);
  CHECK(inertial_source(b, 0.0, a, 2) == 0.0);
  CHECK(inertial_source(b, 0.1, a, 2) == doctest::Approx(0.6242641).epsilon(1e-7));

  // coefficients of sum_k a_k d psi_k / dt when only v_th moves
  const double vth = 1.2, rate = 0.3;
  std::vector<double> c{1.0, 0.2, -0.1, 0.05, 0.02, -0.03, 0.01, 0.0};
  HermiteBasis bb(8, vth);
  const double dv = 1e-6;
  auto ft = [&](double v) {
    return (series(HermiteBasis(8, vth + dv), c, v) - series(HermiteBasis(8, vth - dv), c, v)) / (2 * dv) * rate * vth;
  };
  for (int k = 0; k < 8; ++k) {
    double ck = brute_integral([&](double v) { return ft(v) * eval_probabilist_hermite(k, v / vth); }, -25, 25);
    CHECK(std::abs(ck - inertial_source(bb, rate, c, k)) < 1e-6);
  }
}

TEST_CASE("entropy dissipation diagnostic") {
  const double L = 12.0, kx = 2 * kPi / L;
  DGMesh mesh(16, L);
  SUBCASE("local Maxwellian at the mixed state dissipates nothing") {
    HermiteBasis b(8, 1.0);
    auto c = project_initial_data(b, [](double, double v) { return std::exp(-0.5 * v * v) / std::sqrt(2 * kPi); }, mesh);
    double ex = 1.0;
    // T_ei = (1 + T_i)/2 = 1 with T_i = 1, eps = 1
    CHECK(std::abs(entropy_dissipation_diagnostic(b, mesh, c, 1.0, 0.5, 0.1, 1.0, {}, &ex)) < 1e-12);
    CHECK(ex == 0.0);
  }
  SUBCASE("shifted Maxwellian against ions at rest") {
    HermiteBasis b(24, 1.0);
    auto c = project_initial_data(
        b, [](double, double v) { return std::exp(-0.5 * (v - 0.5) * (v - 0.5)) / std::sqrt(2 * kPi); }, mesh);
    CHECK(entropy_dissipation_diagnostic(b, mesh, c, 1.0, 0.0, 0.1, 1.0) > 1e-4);
  }
  SUBCASE("two-stream data against a dense finite-difference evaluation") {
    auto f0 = [&](double x, double v) {
      double u0 = 0.5 * std::sin(kx * x);
      return (1 + 5 * v * v) / (6 * std::sqrt(2 * kPi)) * std::exp(-0.5 * (v - u0) * (v - u0));
    };
    DGMesh m32(32, L);
    HermiteBasis b(64, 1.0);
    auto c = project_initial_data(b, f0, m32);
    const double d = entropy_dissipation_diagnostic(b, m32, c, 1.0, 0.01, 0.0, 1.0);
    // oracle: midpoint in x, trapezoid in v, centered differences for df/dv
    const int nx = 200, nv = 4001;
    const double vmax = 12.0, dv = 2 * vmax / (nv - 1), hx = L / nx;
    double oracle = 0.0;
    for (int i = 0; i < nx; ++i) {
      double x = (i + 0.5) * hx, n = 0, p = 0, e = 0;
      for (int j = 0; j < nv; ++j) {
        double v = -vmax + j * dv, w = (j == 0 || j == nv - 1) ? 0.5 * dv : dv, f = f0(x, v);
        n += w * f, p += w * v * f, e += w * v * v * f;
      }
      double u = p / n, T = e / n - u * u, s = 0.0;
      for (int j = 0; j < nv; ++j) {
        double v = -vmax + j * dv, w = (j == 0 || j == nv - 1) ? 0.5 * dv : dv, f = f0(x, v);
        double fp = (f0(x, v + 1e-5) - f0(x, v - 1e-5)) / 2e-5, g = fp + (v - u) * f / T;
        s += w * 0.01 * T * g * g / f;
      }
      oracle += hx * s;
    }
    CHECK(d > 0.0);
    CHECK(std::abs(d - oracle) < 0.01 * oracle);
  }
}
