#include "vpfp/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "vpfp/errors.hpp"

namespace vpfp {

std::string to_string(ScenarioKind kind) {
  return kind == ScenarioKind::one_species ? "one_species" : "two_species_simplified";
}

ScenarioKind scenario_from_string(const std::string& name) {
  if (name == "one_species") return ScenarioKind::one_species;
  if (name == "two_species_simplified" || name == "two_species") return ScenarioKind::two_species_simplified;
  throw Error(ErrorKind::config, "unknown scenario '" + name + "'");
}

double ScenarioConfig::wavenumber() const { return 2.0 * std::numbers::pi / length; }

TimeStepperConfig ScenarioConfig::stepper() const {
  TimeStepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.picard_tol = picard_tol;
  c.picard_max_iters = picard_max_iters;
  c.adaptive_enabled = adaptive_enabled;
  c.adaptive_threshold = adaptive_threshold;
  c.adaptive_min_mode = adaptive_min_mode;
  return c;
}

PhysicsParams ScenarioConfig::physics() const {
  PhysicsParams p;
  p.eps = eps;
  p.nu_ee = nu_ee;
  p.nu_ei = nu_ei;
  p.delta_override = delta_override;
  p.beta = beta;
  return p;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.name == b.name && a.scenario == b.scenario && a.eps == b.eps && a.nu_ee == b.nu_ee && a.nu_ei == b.nu_ei &&
         a.length == b.length && a.ion_amplitude == b.ion_amplitude && a.electron_amplitude == b.electron_amplitude &&
         a.drift_amplitude == b.drift_amplitude && a.ion_temperature0 == b.ion_temperature0 &&
         a.n_cells == b.n_cells && a.n_modes == b.n_modes && a.order == b.order && a.beta == b.beta && a.dt == b.dt &&
         a.t_end == b.t_end && a.delta_override == b.delta_override && a.picard_tol == b.picard_tol &&
         a.picard_max_iters == b.picard_max_iters && a.adaptive_enabled == b.adaptive_enabled &&
         a.adaptive_threshold == b.adaptive_threshold && a.adaptive_min_mode == b.adaptive_min_mode &&
         a.output_interval == b.output_interval && a.snapshot_times == b.snapshot_times &&
         a.snapshot_nx == b.snapshot_nx && a.snapshot_nv == b.snapshot_nv && a.snapshot_vmax == b.snapshot_vmax &&
         a.entropy_grid.points == b.entropy_grid.points && a.entropy_grid.half_width == b.entropy_grid.half_width;
}

namespace {

void check(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw Error(ErrorKind::config, "field '" + field + "': " + what);
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  check(cfg.eps > 0.0 && cfg.eps <= 1.0, "eps", "must lie in (0, 1]");
  check(cfg.nu_ee >= 0.0, "nu_ee", "must be nonnegative");
  check(cfg.nu_ei >= 0.0, "nu_ei", "must be nonnegative");
  check(cfg.length > 0.0, "length", "must be positive");
  check(std::abs(cfg.ion_amplitude) < 1.0, "ion_amplitude", "must keep the ion density positive");
  check(std::abs(cfg.electron_amplitude) < 1.0, "electron_amplitude", "must keep the electron density positive");
  check(cfg.ion_temperature0 >= 0.0, "ion_temperature0", "must be nonnegative");
  check(cfg.n_cells >= 2, "n_cells", "must be at least 2");
  check(cfg.n_modes >= 3, "n_modes", "must be at least 3");
  check(cfg.order >= 0 && cfg.order <= 6, "order", "must lie in [0, 6]");
  check(cfg.beta > 0.0, "beta", "must be positive");
  check(cfg.dt > 0.0, "dt", "must be positive");
  check(cfg.t_end >= 0.0, "t_end", "must be nonnegative");
  check(!cfg.delta_override || *cfg.delta_override >= 0.0, "delta", "must be nonnegative");
  check(cfg.picard_tol > 0.0, "picard_tol", "must be positive");
  check(cfg.picard_max_iters > 0, "picard_max_iters", "must be positive");
  check(cfg.adaptive_threshold > 0.0, "adaptive_threshold", "must be positive");
  check(cfg.adaptive_min_mode >= 3, "adaptive_min_mode", "must be at least 3");
  check(cfg.output_interval > 0.0, "output_interval", "must be positive");
  check(cfg.snapshot_nx > 0 && cfg.snapshot_nv > 0, "snapshot", "resolutions must be positive");
  check(cfg.snapshot_vmax > 0.0, "snapshot_vmax", "must be positive");
  check(cfg.entropy_grid.points >= 2 && cfg.entropy_grid.half_width > 0.0, "entropy", "grid must be nondegenerate");
  for (double t : cfg.snapshot_times) check(t >= 0.0, "snapshot_times", "must be nonnegative");
  if (cfg.scenario == ScenarioKind::one_species) {
    check(cfg.eps == 1.0, "eps", "the one-species scenario requires eps = 1");
    check(cfg.nu_ei == 0.0, "nu_ei", "the one-species scenario has no electron-ion collisions");
  }
}

ScenarioConfig preset_one_species() {
  ScenarioConfig c;
  c.name = "one_species_5_1";
  c.snapshot_times = {2.5, 5.0, 12.5, 25.0};
  return c;
}

ScenarioConfig preset_two_species(double eps, double nu_ee) {
  ScenarioConfig c;
  c.name = "two_species_5_2";
  c.scenario = ScenarioKind::two_species_simplified;
  c.eps = eps;
  c.nu_ee = nu_ee;
  c.nu_ei = 0.1;
  c.ion_amplitude = 0.2;
  c.electron_amplitude = 0.01;
  c.drift_amplitude = 0.0;
  c.ion_temperature0 = 1.0;
  c.n_cells = 32;
  c.n_modes = 32;
  c.dt = eps / 500.0;
  c.t_end = 50.0 * eps;
  c.output_interval = eps / 10.0;
  return c;
}

std::vector<std::string> preset_names() { return {"one_species_5_1", "two_species_5_2", "two_species_5_2_nu01"}; }

ScenarioConfig preset(const std::string& name) {
  if (name == "one_species_5_1") return preset_one_species();
  if (name == "two_species_5_2") return preset_two_species();
  if (name == "two_species_5_2_nu01") {
    ScenarioConfig c = preset_two_species(1.0, 0.1);
    c.name = name;
    return c;
  }
  throw Error(ErrorKind::config, "unknown preset '" + name + "'");
}

PhaseSpaceFunction initial_electron_distribution(const ScenarioConfig& cfg) {
  const double k = cfg.wavenumber();
  const double s2pi = std::sqrt(2.0 * std::numbers::pi);
  if (cfg.scenario == ScenarioKind::one_species) {
    const double a = cfg.drift_amplitude;
    return [=](double x, double v) {
      const double u0 = a * std::sin(k * x);
      return (1.0 + 5.0 * v * v) * std::exp(-0.5 * (v - u0) * (v - u0)) / (6.0 * s2pi);
    };
  }
  const double a = cfg.electron_amplitude;
  return [=](double x, double v) { return std::exp(-0.5 * v * v) * (1.0 + a * std::cos(k * x)) / s2pi; };
}

std::function<double(double)> ion_density_profile(const ScenarioConfig& cfg) {
  const double k = cfg.wavenumber(), a = cfg.ion_amplitude;
  return [=](double x) { return 1.0 + a * std::cos(k * x); };
}

IonState ion_background(const ScenarioConfig& cfg, const DGMesh& mesh) {
  IonState ions;
  ions.density = project(mesh, ion_density_profile(cfg));
  ions.dynamic_temperature = cfg.scenario == ScenarioKind::two_species_simplified;
  ions.temperature = ions.dynamic_temperature ? cfg.ion_temperature0 : 0.0;
  return ions;
}

double total_momentum(const DGMesh& mesh, const HermiteBasis& basis, const HermiteCoefficients& coeffs) {
  return basis.v_th() * integral(mesh, coeffs.mode(1));
}

void momentum_admissibility_check(const ScenarioConfig& cfg, const DGMesh& mesh, const HermiteBasis& basis,
                                  const HermiteCoefficients& coeffs, double tol) {
  if (cfg.scenario != ScenarioKind::one_species) return;
  const double p = total_momentum(mesh, basis, coeffs);
  if (!(std::abs(p) <= tol))
    throw Error(ErrorKind::admissibility, "initial momentum " + std::to_string(p) + " is not zero");
}

double kinetic_energy(const DGMesh& mesh, const HermiteBasis& basis, const HermiteCoefficients& coeffs) {
  const double v = basis.v_th();
  return 0.5 * v * v * (integral(mesh, coeffs.mode(0)) + std::sqrt(2.0) * integral(mesh, coeffs.mode(2)));
}

InitialData initialize(const ScenarioConfig& cfg) {
  validate(cfg);
  DGMesh mesh(cfg.n_cells, cfg.length, cfg.order);
  SimulationState st;
  st.ions = ion_background(cfg, mesh);
  const double n_ion = integral(mesh, st.ions.density.span());
  const auto f0 = initial_electron_distribution(cfg);
  LdgPoisson poisson(mesh, cfg.beta);
  PoissonBoltzmannSolver pb(mesh, st.ions.density, cfg.beta);
  const double ref = l2_norm(st.ions.density.span());

  double v = 1.0, factor = 1.0;
  LimitState limit;
  for (int it = 0; it < 20; ++it) {
    st.basis = HermiteBasis(cfg.n_modes, v);
    st.electrons = project_initial_data(st.basis, f0, mesh);
    const double n_e = integral(mesh, st.electrons.mode(0));
    if (!(n_e > 0.0)) throw Error(ErrorKind::nonpositive_density, "projected electron number is not positive");
    factor = n_ion / n_e;
    for (double& a : st.electrons.data()) a *= factor;
    DGFunction rhs = st.ions.density;
    for (std::size_t i = 0; i < rhs.coeffs.size(); ++i) rhs.coeffs[i] -= st.electrons.mode(0)[i];
    st.field = poisson.solve(rhs, ref);
    st.budget.particle_number = n_ion;
    st.budget.ion_energy = ion_energy(st);
    st.budget.total_energy = kinetic_energy(mesh, st.basis, st.electrons) +
                             discrete_field_energy(mesh, st.field, cfg.beta) + st.budget.ion_energy;
    limit = pb.find_limit_temperature(st.budget, v * v);
    const double v_new = std::sqrt(limit.T_bar);
    if (std::abs(v_new - v) <= 1e-13 * v) break;
    v = v_new;
  }
  momentum_admissibility_check(cfg, mesh, st.basis, st.electrons);
  adaptive_mask_update(st.electrons, mesh, cfg.stepper());
  return InitialData{mesh, std::move(st), std::move(limit), factor};
}

}  // namespace vpfp
