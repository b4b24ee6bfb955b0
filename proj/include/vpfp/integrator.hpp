#pragma once

#include <memory>
#include <optional>

#include "vpfp/fourier_preconditioner.hpp"
#include "vpfp/hermite_basis.hpp"
#include "vpfp/kernels.hpp"
#include "vpfp/limit_model.hpp"

namespace vpfp {

struct TimeStepperConfig {
  double dt = 0.002;
  double t_end = 0.0;
  double picard_tol = 1e-10;
  int picard_max_iters = 50;
  bool adaptive_enabled = true;
  double adaptive_threshold = 1e-6;
  int adaptive_min_mode = 3;
};

struct PhysicsParams {
  double eps = 1.0;
  double nu_ee = 0.0;
  double nu_ei = 0.0;
  std::optional<double> delta_override;
  double beta = 1.0;  // LDG penalty
};

/** Ion background: fixed density, at rest; the temperature evolves when dynamic. */
struct IonState {
  DGFunction density;
  bool dynamic_temperature = false;
  double temperature = 0.0;
};

struct SimulationState {
  double time = 0.0;
  long step = 0;
  HermiteBasis basis{3, 1.0};
  HermiteCoefficients electrons;
  FieldSolution field;
  IonState ions;
  EnergyBudget budget;
};

struct StepReport {
  int picard_iterations = 0;
  double last_increment = 0.0;
  double ion_exchange = 0.0;
  int negative_temperature_nodes = 0;
};

/** Ion energy 0.5 N T_i for the dynamic-temperature model, 0 otherwise. */
double ion_energy(const SimulationState& state);

/**
 * Algorithm-1 activity mask: for k >= min_mode, mode k is inactive iff the sup norms
 * of a_{k-1}, a_k, a_{k+1} are all <= threshold (a_{N_H} := 0). Inactive modes are zeroed.
 */
void adaptive_mask_update(HermiteCoefficients& coeffs, const DGMesh& mesh, const TimeStepperConfig& cfg);

/**
 * Crank-Nicolson step in midpoint form. The midpoint state y solves R(y) = 0
 * (see CnResidual); iterates y <- y - P^{-1} R(y) with P the Fourier-diagonalized
 * frozen transport-collision operator, so every sweep refreezes moments, field and
 * ion temperature at the current midpoint iterate.
 */
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const DGMesh& mesh, int n_modes, const DGFunction& ion_density, PhysicsParams physics,
                       TimeStepperConfig cfg);

  const TimeStepperConfig& config() const { return cfg_; }
  const PhysicsParams& physics() const { return physics_; }
  CnResidual& residual() { return residual_; }

  /** Field consistent with the electron density of the given coefficients. */
  FieldSolution solve_field(const HermiteCoefficients& coeffs) const;

  /**
   * Advances state by dt. v_th_new is the scaling velocity at the end of the step,
   * rate = v_th'/v_th at the midpoint.
   */
  StepReport step(SimulationState& state, double v_th_new, double rate);

  double viscosity(double v_th) const;

 private:
  DGMesh mesh_;
  int n_modes_;
  PhysicsParams physics_;
  TimeStepperConfig cfg_;
  CnResidual residual_;
  FourierPreconditioner precond_;
  std::vector<double> prev_, y_, r_, d_;
  std::vector<char> prev_mask_;
  bool have_prev_ = false;
};

}  // namespace vpfp
