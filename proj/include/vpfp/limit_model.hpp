#pragma once

#include <optional>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "vpfp/dg_space.hpp"
#include "vpfp/ldg_poisson.hpp"

namespace vpfp {

struct EnergyBudget {
  double total_energy = 0.0;     // E, conserved
  double particle_number = 0.0;  // N
  double ion_energy = 0.0;       // int w_i dx, current
};

struct LimitState {
  DGFunction phi_bar;
  DGFunction n_e_bar;
  FieldSolution field;
  double T_bar = 0.0;
  double c = 0.0;
};

struct PoissonBoltzmannResult {
  FieldSolution field;  // phi and E = -phi'
  DGFunction n_e;       // c exp(phi/T) projected with the mesh quadrature
  double c = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct NewtonOptions {
  int max_iterations = 100;
  int max_halvings = 30;
  double tolerance = 1e-11;
};

/** Discrete field energy 0.5 ||E_h||^2 + 0.5 beta sum [phi]^2 of an LDG pair. */
double discrete_field_energy(const DGMesh& mesh, const FieldSolution& field, double beta);

/**
 * Damped Newton for the LDG discretization of -phi'' + c exp(phi/T) = n_i with
 * c = N / int exp(phi/T) and int phi = 0. Integrals of the exponential use the
 * mesh quadrature; the Boltzmann term is evaluated with max-subtraction.
 */
class PoissonBoltzmannSolver {
 public:
  PoissonBoltzmannSolver(const DGMesh& mesh, const DGFunction& n_i, double beta, NewtonOptions options = {});

  const DGMesh& mesh() const { return mesh_; }
  double beta() const { return beta_; }
  const DGFunction& ion_density() const { return n_i_; }

  /** Solves at temperature T; starts from initial_phi if given, else from the last solution. */
  PoissonBoltzmannResult solve(double T, double N, const DGFunction* initial_phi = nullptr);

  /** Residual history of the last solve (norm before each accepted step, then the final norm). */
  const std::vector<double>& residual_history() const { return history_; }

  /** N T/2 + discrete field energy + ion energy. */
  double energy_of_temperature(const EnergyBudget& budget, double T, PoissonBoltzmannResult* out = nullptr);

  /**
   * Root of E(T) = total_energy by bracketed regula falsi (Illinois) with bisection fallback.
   * The bracket grows geometrically from hint (default 1) inside [1e-12, 1e8].
   */
  LimitState find_limit_temperature(const EnergyBudget& budget, std::optional<double> hint = std::nullopt,
                                    double rel_tol = 1e-12);

 private:
  Eigen::VectorXd residual(const Eigen::VectorXd& z, double T, double N, Eigen::VectorXd* a, std::vector<double>* eq,
                           double* scale) const;

  DGMesh mesh_;
  DGFunction n_i_;
  double beta_;
  NewtonOptions options_;
  std::vector<Eigen::Triplet<double>> base_;
  Eigen::SparseMatrix<double> K_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool analyzed_ = false;
  Eigen::VectorXd last_;
  std::vector<double> history_;
};

PoissonBoltzmannResult solve_poisson_boltzmann(const DGMesh& mesh, const DGFunction& n_i, double T, double N);
double energy_of_temperature(const DGMesh& mesh, const DGFunction& n_i, const EnergyBudget& budget, double T);
LimitState find_limit_temperature(const DGMesh& mesh, const DGFunction& n_i, const EnergyBudget& budget);

/**
 * Follows v_th = sqrt(T_bar(ion energy)) along a run. Small changes of the ion
 * energy are absorbed by a first-order update around the last exact root; an
 * exact root is recomputed once the accumulated change exceeds resolve_tol * E.
 */
class VthTracker {
 public:
  VthTracker(const DGMesh& mesh, const DGFunction& n_i, double beta, EnergyBudget budget, double resolve_tol = 1e-9);

  /** Returns (v_th, (v_th - v_th_prev) / (dt v_th_mid)) for the new ion energy; the rate is 0 on the first call. */
  std::pair<double, double> update(double ion_energy, double dt);

  double v_th() const { return v_th_; }
  const LimitState& limit() const { return limit_; }
  PoissonBoltzmannSolver& solver() { return solver_; }

 private:
  void exact(double ion_energy);

  PoissonBoltzmannSolver solver_;
  EnergyBudget budget_;
  double resolve_tol_;
  LimitState limit_;
  double anchor_energy_ = 0.0;
  double slope_ = 0.0;
  double v_th_ = 0.0;
  bool started_ = false;
};

}  // namespace vpfp
