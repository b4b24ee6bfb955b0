#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/limit_model.hpp"

using namespace vpfp;

namespace {
const double kPi = std::numbers::pi;
const double L = 12.0, kx = 2 * kPi / L;
}  // namespace

TEST_CASE("Poisson-Boltzmann with uniform ions") {
  DGMesh mesh(8, L);
  auto ni = project(mesh, [](double) { return 1.0; });
  auto r = solve_poisson_boltzmann(mesh, ni, 0.7, 12.0);
  CHECK(l2_norm(r.field.phi.span()) < 1e-13);
  CHECK(r.c == doctest::Approx(1.0).epsilon(1e-13));
  EnergyBudget b{0.0, 12.0, 0.4};
  CHECK(energy_of_temperature(mesh, ni, b, 1.5) == doctest::Approx(12.0 * 0.75 + 0.4).epsilon(1e-13));
  CHECK(energy_of_temperature(mesh, ni, b, 1e-8) == doctest::Approx(0.4).epsilon(1e-6));
  CHECK_THROWS_AS(solve_poisson_boltzmann(mesh, ni, 0.0, 12.0), Error);
}

TEST_CASE("Poisson-Boltzmann against the pseudospectral oracle") {
  auto ni = [](double x) { return 1.0 + 0.2 * std::cos(kx * x); };
  DGMesh mesh(64, L);
  auto r = solve_poisson_boltzmann(mesh, project(mesh, ni), 1.0, 12.0);
  double c_ref;
  auto phi = oracle::poisson_boltzmann(64, L, ni, 1.0, 12.0, &c_ref);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) worst = std::max(worst, std::abs(evaluate(mesh, r.field.phi.span(), i * L / 64) - phi[i]));
  CHECK(worst < 1e-5);
  CHECK(r.c == doctest::Approx(c_ref).epsilon(1e-5));
  CHECK(integral(mesh, r.n_e.span()) == doctest::Approx(12.0).epsilon(1e-13));
  CHECK(std::abs(integral(mesh, r.field.phi.span())) < 1e-12);
}

TEST_CASE("large temperature approaches the linear problem") {
  DGMesh mesh(32, L);
  auto ni = project(mesh, [](double x) { return 1.0 + 0.2 * std::cos(kx * x); });
  auto r = solve_poisson_boltzmann(mesh, ni, 1e4, 12.0);
  auto rhs = ni;
  for (int j = 0; j < 32; ++j) rhs(j, 0) -= std::sqrt(mesh.h());
  auto lin = solve_poisson_ldg(mesh, rhs, default_penalty(mesh));
  double worst = 0.0;
  for (int i = 0; i < mesh.n_dofs(); ++i) worst = std::max(worst, std::abs(r.field.phi.coeffs[i] - lin.phi.coeffs[i]));
  CHECK(worst < 1e-3);
}

TEST_CASE("Newton residual decreases and the result is gauge independent") {
  DGMesh mesh(32, L);
  auto ni = project(mesh, [](double x) { return 1.0 + 0.1 * std::cos(kx * x); });
  PoissonBoltzmannSolver s(mesh, ni, default_penalty(mesh));
  DGFunction guess(mesh);
  auto a = s.solve(0.3, 12.0, &guess);
  const auto& h = s.residual_history();
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] < h[i - 1]);
  for (int j = 0; j < 32; ++j) guess(j, 0) = 5.0 * std::sqrt(mesh.h());
  auto b = s.solve(0.3, 12.0, &guess);
  for (int i = 0; i < mesh.n_dofs(); ++i) CHECK(std::abs(a.field.phi.coeffs[i] - b.field.phi.coeffs[i]) < 1e-10);

  // the limit density and potential satisfy the linear Poisson equation
  auto rhs = ni;
  for (int i = 0; i < mesh.n_dofs(); ++i) rhs.coeffs[i] -= a.n_e.coeffs[i];
  auto lin = solve_poisson_ldg(mesh, rhs, default_penalty(mesh));
  for (int i = 0; i < mesh.n_dofs(); ++i) CHECK(std::abs(lin.phi.coeffs[i] - a.field.phi.coeffs[i]) < 1e-10);
}

TEST_CASE("energy map is increasing") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.15, 0.15);
  DGMesh mesh(16, L);
  for (int trial = 0; trial < 5; ++trial) {
    double a1 = U(rng), a2 = U(rng), b1 = U(rng);
    auto ni = project(mesh, [&](double x) { return 1.0 + a1 * std::cos(kx * x) + a2 * std::cos(2 * kx * x) + b1 * std::sin(3 * kx * x); });
    PoissonBoltzmannSolver s(mesh, ni, default_penalty(mesh));
    EnergyBudget b{0.0, 12.0, 0.0};
    double prev = -1.0;
    for (double T : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      double e = s.energy_of_temperature(b, T);
      CHECK(e > prev);
      prev = e;
    }
  }
}

TEST_CASE("limit temperature") {
  DGMesh mesh(16, L);
  auto flat = project(mesh, [](double) { return 1.0; });
  auto st = find_limit_temperature(mesh, flat, EnergyBudget{0.3 + 6.0, 12.0, 0.3});
  CHECK(st.T_bar == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS_AS(find_limit_temperature(mesh, flat, EnergyBudget{0.2, 12.0, 0.3}), Error);

  auto ni = project(mesh, [](double x) { return 1.0 + 0.2 * std::cos(kx * x); });
  EnergyBudget b{7.5, 12.0, 0.0};
  auto lim = find_limit_temperature(mesh, ni, b);
  CHECK(std::abs(energy_of_temperature(mesh, ni, b, lim.T_bar) - 7.5) < 1e-10 * 7.5);
  CHECK(integral(mesh, lim.n_e_bar.span()) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(lim.T_bar < 1.25);
}

TEST_CASE("thermal speed tracking") {
  DGMesh mesh(16, L);
  auto ni = project(mesh, [](double x) { return 1.0 + 0.2 * std::cos(kx * x); });
  VthTracker t(mesh, ni, default_penalty(mesh), EnergyBudget{8.0, 12.0, 1.0});
  auto [v0, r0] = t.update(1.0, 0.01);
  CHECK(r0 == 0.0);
  auto [v1, r1] = t.update(1.0, 0.01);
  CHECK(v1 == v0);
  CHECK(r1 == 0.0);
  auto [v2, r2] = t.update(1.0 + 1e-7, 0.01);
  CHECK(v2 < v1);
  CHECK(r2 < 0.0);
  auto exact = find_limit_temperature(mesh, ni, EnergyBudget{8.0, 12.0, 1.0 + 1e-7});
  CHECK(v2 * v2 == doctest::Approx(exact.T_bar).epsilon(1e-12));
}
