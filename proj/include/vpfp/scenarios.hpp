#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vpfp/collisions.hpp"
#include "vpfp/integrator.hpp"
#include "vpfp/limit_model.hpp"

namespace vpfp {

enum class ScenarioKind { one_species, two_species_simplified };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

struct ScenarioConfig {
  std::string name = "custom";
  ScenarioKind scenario = ScenarioKind::one_species;
  double eps = 1.0;
  double nu_ee = 0.01;
  double nu_ei = 0.0;
  double length = 12.0;
  double ion_amplitude = 0.1;       // n_i = 1 + ion_amplitude cos(kx)
  double electron_amplitude = 0.0;  // two-species density modulation
  double drift_amplitude = 0.5;     // one-species u_0 = drift_amplitude sin(kx)
  double ion_temperature0 = 1.0;
  int n_cells = 32;
  int n_modes = 64;
  int order = 2;
  double beta = 1.0;
  double dt = 1.0 / 500.0;
  double t_end = 25.0;
  std::optional<double> delta_override;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  bool adaptive_enabled = true;
  double adaptive_threshold = 1e-6;
  int adaptive_min_mode = 3;
  double output_interval = 0.1;  // time between series records
  std::vector<double> snapshot_times;
  int snapshot_nx = 128;
  int snapshot_nv = 128;
  double snapshot_vmax = 6.0;
  VelocityGrid entropy_grid;

  double wavenumber() const;
  TimeStepperConfig stepper() const;
  PhysicsParams physics() const;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/** Checks ranges and forces the one-species conventions (eps = 1, nu_ei = 0). Throws config errors. */
void validate(const ScenarioConfig& cfg);

ScenarioConfig preset_one_species();
/** Two-species preset at the given eps with dt = eps / 500. */
ScenarioConfig preset_two_species(double eps = 1e-3, double nu_ee = 0.5);
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

PhaseSpaceFunction initial_electron_distribution(const ScenarioConfig& cfg);
std::function<double(double)> ion_density_profile(const ScenarioConfig& cfg);
IonState ion_background(const ScenarioConfig& cfg, const DGMesh& mesh);

/** int v_th alpha_1 dx. */
double total_momentum(const DGMesh& mesh, const HermiteBasis& basis, const HermiteCoefficients& coeffs);

/** Throws admissibility when |int v_th alpha_1 dx| > tol for the one-species scenario. */
void momentum_admissibility_check(const ScenarioConfig& cfg, const DGMesh& mesh, const HermiteBasis& basis,
                                  const HermiteCoefficients& coeffs, double tol = 1e-10);

/** 0.5 int v_th^2 (alpha_0 + sqrt(2) alpha_2) dx. */
double kinetic_energy(const DGMesh& mesh, const HermiteBasis& basis, const HermiteCoefficients& coeffs);

struct InitialData {
  DGMesh mesh;
  SimulationState state;
  LimitState limit;
  double neutrality_factor = 1.0;  // factor applied to the projected electron coefficients
};

/**
 * Projects f_0, rescales it to the ion particle number, solves Poisson and the
 * limit problem, and re-projects with v_th = sqrt(T_bar) until v_th is consistent
 * with the energy of the projected data.
 */
InitialData initialize(const ScenarioConfig& cfg);

}  // namespace vpfp
