#include "vpfp/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/errors.hpp"

namespace vpfp {

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double ion_energy(const SimulationState& state) {
  if (!state.ions.dynamic_temperature) return 0.0;
  return 0.5 * state.budget.particle_number * state.ions.temperature;
}

void adaptive_mask_update(HermiteCoefficients& coeffs, const DGMesh& mesh, const TimeStepperConfig& cfg) {
  (void)mesh;
  if (!cfg.adaptive_enabled) return;
  require(cfg.adaptive_min_mode >= 3, "adaptive_min_mode must be at least 3");
  const int nh = coeffs.n_modes();
  std::vector<double> norms(nh + 1, 0.0);
  for (int k = 0; k < nh; ++k) norms[k] = coeffs.active(k) ? sup_norm(coeffs.mode(k)) : 0.0;
  for (int k = cfg.adaptive_min_mode; k < nh; ++k) {
    const bool small = norms[k - 1] <= cfg.adaptive_threshold && norms[k] <= cfg.adaptive_threshold &&
                       norms[k + 1] <= cfg.adaptive_threshold;
    coeffs.set_active(k, !small);
  }
  coeffs.zero_inactive();
}

CrankNicolsonStepper::CrankNicolsonStepper(const DGMesh& mesh, int n_modes, const DGFunction& ion_density,
                                           PhysicsParams physics, TimeStepperConfig cfg)
    : mesh_(mesh),
      n_modes_(n_modes),
      physics_(physics),
      cfg_(cfg),
      residual_(mesh, n_modes, ion_density, physics.beta),
      precond_(mesh, n_modes) {
  require(cfg.dt > 0.0, "dt must be positive");
  require(cfg.picard_tol > 0.0 && cfg.picard_max_iters > 0, "Picard parameters must be positive");
  require(physics.eps > 0.0, "eps must be positive");
  const std::size_t n = static_cast<std::size_t>(n_modes) * mesh.n_dofs();
  prev_.assign(n, 0.0);
  y_.assign(n, 0.0);
  r_.assign(n, 0.0);
  d_.assign(n, 0.0);
}

double CrankNicolsonStepper::viscosity(double v_th) const {
  return physics_.delta_override ? *physics_.delta_override : default_viscosity(v_th, n_modes_);
}

FieldSolution CrankNicolsonStepper::solve_field(const HermiteCoefficients& coeffs) const {
  return residual_.field(coeffs.mode(0));
}

StepReport CrankNicolsonStepper::step(SimulationState& state, double v_th_new, double rate) {
  HermiteCoefficients& alpha = state.electrons;
  require(alpha.n_modes() == n_modes_, "state has the wrong number of Hermite modes");
  const std::vector<char>& mask = alpha.mask();
  const std::size_t n = y_.size();
  const double dt = cfg_.dt, eps = physics_.eps;
  const double v_mid = 0.5 * (state.basis.v_th() + v_th_new);

  CnParams prm;
  prm.dt = dt;
  prm.eps = eps;
  prm.v_th = v_mid;
  prm.rate = rate;
  prm.delta = viscosity(v_mid);
  prm.nu_ee = physics_.nu_ee;
  prm.nu_ei = physics_.nu_ei;
  const double T_old = state.ions.temperature;
  prm.ion_T = T_old;

  const FourierPreconditioner::Params& fp = precond_.params();
  const bool refactor = !precond_.factored() || precond_.mask() != mask ||
                        std::abs(fp.v_th - v_mid) > 1e-3 * v_mid || fp.diagonal != 2.0 * eps / dt;
  if (refactor) precond_.factor({2.0 * eps / dt, physics_.nu_ee + physics_.nu_ei, v_mid, prm.delta}, mask);

  const std::span<const double> a_old = alpha.data();
  if (have_prev_ && prev_mask_ == mask) {
    for (std::size_t i = 0; i < n; ++i) y_[i] = a_old[i] + 0.5 * (a_old[i] - prev_[i]);
  } else {
    std::copy(a_old.begin(), a_old.end(), y_.begin());
  }

  const double n_ion = state.budget.particle_number;
  const bool dyn = state.ions.dynamic_temperature;
  StepReport report;
  ResidualInfo info;
  bool converged = false;
  for (int it = 1; it <= cfg_.picard_max_iters; ++it) {
    residual_.evaluate(y_, a_old, mask, prm, r_, &info);
    precond_.apply(r_, d_);
    for (std::size_t i = 0; i < n; ++i) y_[i] -= d_[i];
    const double scale = sup_norm(y_);
    const double incr = 2.0 * sup_norm(d_) / (scale > 0.0 ? scale : 1.0);
    double dtau = 0.0;
    if (dyn) {
      const double tau = T_old + 0.5 * dt * std::sqrt(2.0) * v_mid * v_mid * info.ion_exchange / (eps * n_ion);
      dtau = std::abs(tau - prm.ion_T) / std::max(1.0, std::abs(tau));
      prm.ion_T = tau;
    }
    report.picard_iterations = it;
    report.last_increment = std::max(incr, dtau);
    if (!std::isfinite(report.last_increment)) break;
    if (incr < cfg_.picard_tol && dtau < cfg_.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorKind::picard_divergence,
                "Picard iteration did not converge in " + std::to_string(report.picard_iterations) +
                    " iterations at t=" + std::to_string(state.time) +
                    ", last increment " + std::to_string(report.last_increment));
  report.ion_exchange = info.ion_exchange;
  report.negative_temperature_nodes = info.negative_temperature_nodes;

  std::copy(a_old.begin(), a_old.end(), prev_.begin());
  prev_mask_ = mask;
  have_prev_ = true;
  std::span<double> a = alpha.data();
  for (std::size_t i = 0; i < n; ++i) a[i] = 2.0 * y_[i] - prev_[i];
  alpha.zero_inactive();
  if (dyn) state.ions.temperature = 2.0 * prm.ion_T - T_old;
  state.basis = HermiteBasis(n_modes_, v_th_new);
  state.field = solve_field(alpha);
  state.time += dt;
  ++state.step;
  return report;
}

}  // namespace vpfp
