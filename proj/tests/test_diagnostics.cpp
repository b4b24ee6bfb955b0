#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vpfp/diagnostics.hpp"
#include "vpfp/quadrature.hpp"
#include "vpfp/scenarios.hpp"
#include "vpfp/simulation.hpp"

using namespace vpfp;

namespace {

struct Fixture {
  DGMesh mesh{8, 12.0};
  SimulationState st;
  LimitState limit;
};

Fixture equilibrium(double T) {
  Fixture f;
  DGFunction ni = project(f.mesh, [](double x) { return 1.0 + 0.2 * std::cos(2 * std::numbers::pi * x / 12.0); });
  PoissonBoltzmannSolver pb(f.mesh, ni, 1.0);
  const PoissonBoltzmannResult r = pb.solve(T, 12.0);
  f.st.basis = HermiteBasis(8, std::sqrt(T));
  f.st.electrons = HermiteCoefficients(8, f.mesh);
  std::copy(r.n_e.coeffs.begin(), r.n_e.coeffs.end(), f.st.electrons.mode(0).begin());
  f.st.ions.density = ni;
  f.st.field = LdgPoisson(f.mesh, 1.0).solve([&] {
    DGFunction rho = ni;
    for (std::size_t i = 0; i < rho.coeffs.size(); ++i) rho.coeffs[i] -= r.n_e.coeffs[i];
    return rho;
  }());
  f.limit.phi_bar = r.field.phi;
  f.limit.T_bar = T;
  return f;
}

}  // namespace

TEST_CASE("record of a Maxwell-Boltzmann state") {
  Fixture f = equilibrium(1.3);
  const ConservedQuantities ref = conserved_quantities(f.mesh, f.st, 1.0);
  const DiagnosticRecord r = compute_record(f.mesh, f.st, f.limit, ref, {});
  CHECK(r.mass_dev == 0.0);
  CHECK(r.energy_dev == 0.0);
  CHECK(r.momentum_dev == 0.0);
  CHECK(r.u_l2 == 0.0);
  CHECK(r.T_dev_l2 < 1e-14);
  CHECK(r.phi_dev < 1e-9);
  for (double a : r.l2_alpha) CHECK(a == 0.0);
  CHECK(r.potential_energy >= 0.0);
  CHECK(r.Te_mean == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(r.active_mode_count == 8);
}

TEST_CASE("homogeneous energy is v_th^2 n L / 2") {
  DGMesh mesh(6, 12.0);
  SimulationState st;
  st.basis = HermiteBasis(5, 1.4);
  st.electrons = HermiteCoefficients(5, mesh);
  const DGFunction n = project(mesh, [](double) { return 0.9; });
  std::copy(n.coeffs.begin(), n.coeffs.end(), st.electrons.mode(0).begin());
  st.field.phi = DGFunction(mesh);
  st.field.efield = DGFunction(mesh);
  const ConservedQuantities q = conserved_quantities(mesh, st, 1.0);
  CHECK(q.energy == doctest::Approx(0.5 * 1.4 * 1.4 * 0.9 * 12.0).epsilon(1e-14));
}

TEST_CASE("energy diagnostic agrees with dense quadrature of the reconstruction") {
  ScenarioConfig c = preset_one_species();
  c.n_cells = 8;
  c.n_modes = 24;
  const InitialData init = initialize(c);
  const ConservedQuantities q = conserved_quantities(init.mesh, init.state, c.beta);
  // kinetic part by Gauss-Legendre in v on [-14, 14] x per-cell Gauss-Legendre in x
  const auto gx = gauss_legendre(8), gv = gauss_legendre(200);
  double kin = 0.0;
  const double h = init.mesh.h(), V = 14.0;
  for (int j = 0; j < init.mesh.n_cells(); ++j)
    for (std::size_t a = 0; a < gx.nodes.size(); ++a) {
      const double x = init.mesh.cell_center(j) + 0.5 * h * gx.nodes[a];
      double s = 0.0;
      for (std::size_t b = 0; b < gv.nodes.size(); ++b) {
        const double v = V * gv.nodes[b];
        s += V * gv.weights[b] * v * v * reconstruct_distribution(init.state.basis, init.mesh, init.state.electrons, x, v);
      }
      kin += 0.5 * h * gx.weights[a] * 0.5 * s;
    }
  const double total = kin + discrete_field_energy(init.mesh, init.state.field, c.beta);
  CHECK(std::abs(total - q.energy) < 1e-8 * q.energy);
}

TEST_CASE("entropy does not increase in homogeneous Fokker-Planck relaxation") {
  ScenarioConfig c = preset_one_species();
  c.n_cells = 4;
  c.n_modes = 24;
  c.drift_amplitude = 0.0;
  c.ion_amplitude = 0.0;
  c.nu_ee = 0.5;
  c.t_end = 2.0;
  c.dt = 0.01;
  c.output_interval = 0.01;
  const RunResult r = run(c);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    CHECK(r.records[i].entropy <= r.records[i - 1].entropy + 1e-8);
  }
  CHECK(r.records.back().entropy < r.records.front().entropy - 1e-3);
}

TEST_CASE("snapshots") {
  Fixture f = equilibrium(0.8);
  SUBCASE("single point equals the reconstruction") {
    const Snapshot s = snapshot_distribution(f.mesh, f.st, 1, 3.0, 1);
    CHECK(s.f.size() == 1);
    CHECK(s.f[0] == doctest::Approx(reconstruct_distribution(f.st.basis, f.mesh, f.st.electrons, 6.0, 0.0)).epsilon(1e-14));
  }
  SUBCASE("equilibrium slices share one Gaussian profile") {
    const Snapshot s = snapshot_distribution(f.mesh, f.st, 5, 3.0, 7);
    for (int i = 1; i < 5; ++i) {
      const double ratio = s.f[i * 7 + 3] / s.f[3];
      for (int j = 0; j < 7; ++j) CHECK(s.f[i * 7 + j] == doctest::Approx(ratio * s.f[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("csv header and rows have the same number of fields") {
  DiagnosticRecord r;
  r.time = 0.1;
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(count(csv_header()) == count(csv_row(r)));
  CHECK(std::stod(csv_row(r).substr(0, csv_row(r).find(','))) == 0.1);
}
