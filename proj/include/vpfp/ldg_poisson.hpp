#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <memory>

#include "vpfp/dg_space.hpp"

namespace vpfp {

struct FieldSolution {
  DGFunction phi;
  DGFunction efield;
};

/**
 * LDG discretization of -phi'' = rho, E = -phi' on the periodic mesh with
 * fluxes phi^ = {phi}, E^ = {E} - beta [phi] and a Lagrange multiplier
 * enforcing int phi = 0. Unknown ordering: phi (n_dofs), E (n_dofs), lambda.
 * The matrix is assembled and factorized once.
 */
class LdgPoisson {
 public:
  LdgPoisson(const DGMesh& mesh, double beta);

  const DGMesh& mesh() const { return mesh_; }
  double beta() const { return beta_; }
  int size() const { return 2 * mesh_.n_dofs() + 1; }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }

  /**
   * Solves for (phi, E). Throws a compatibility error when |int rhs| exceeds
   * 1e-10 max(||rhs||, reference_scale).
   */
  FieldSolution solve(const DGFunction& rhs, double reference_scale = 0.0) const;

 private:
  DGMesh mesh_;
  double beta_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

/** Default penalty, a mesh-independent constant (1). */
double default_penalty(const DGMesh& mesh);

FieldSolution solve_poisson_ldg(const DGMesh& mesh, const DGFunction& rhs, double beta);

/** 0.5 ||E_h||^2. */
double field_energy(const FieldSolution& field);
/** 0.5 beta sum_i [phi]_i^2, the interface part of the discrete field energy. */
double jump_energy(const DGMesh& mesh, const FieldSolution& field, double beta);

/** Appends the LDG operator triplets with the given row/column offsets. */
void ldg_triplets(const DGMesh& mesh, double beta, std::vector<Eigen::Triplet<double>>& out);

}  // namespace vpfp
