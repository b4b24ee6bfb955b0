#include "vpfp/ldg_poisson.hpp"

#include <cmath>

#include "vpfp/errors.hpp"

namespace vpfp {

double default_penalty(const DGMesh&) { return 1.0; }

void ldg_triplets(const DGMesh& mesh, double beta, std::vector<Eigen::Triplet<double>>& t) {
  const int nc = mesh.n_cells(), nl = mesh.n_local(), nd = mesh.n_dofs();
  const int e0 = nd;
  auto phi = [&](int j, int r) { return ((j % nc + nc) % nc) * nl + r; };
  auto ef = [&](int j, int r) { return e0 + ((j % nc + nc) % nc) * nl + r; };
  for (int j = 0; j < nc; ++j)
    for (int p = 0; p < nl; ++p) {
      const double Rp = mesh.right_trace(p), Lp = mesh.left_trace(p);
      // (E, eta) - int phi eta' + {phi}_{j+1/2} eta^- - {phi}_{j-1/2} eta^+ = 0
      const int row_a = phi(j, p);
      t.emplace_back(row_a, ef(j, p), 1.0);
      for (int r = 0; r < nl; ++r) {
        t.emplace_back(row_a, phi(j, r), -mesh.stiffness(p, r));
        t.emplace_back(row_a, phi(j, r), 0.5 * Rp * mesh.right_trace(r));
        t.emplace_back(row_a, phi(j + 1, r), 0.5 * Rp * mesh.left_trace(r));
        t.emplace_back(row_a, phi(j - 1, r), -0.5 * Lp * mesh.right_trace(r));
        t.emplace_back(row_a, phi(j, r), -0.5 * Lp * mesh.left_trace(r));
      }
      // -int E zeta' + Ehat_{j+1/2} zeta^- - Ehat_{j-1/2} zeta^+ = (rho, zeta)
      const int row_b = e0 + j * nl + p;
      for (int r = 0; r < nl; ++r) {
        t.emplace_back(row_b, ef(j, r), -mesh.stiffness(p, r));
        // right interface j+1/2: minus side cell j, plus side cell j+1
        t.emplace_back(row_b, ef(j, r), 0.5 * Rp * mesh.right_trace(r));
        t.emplace_back(row_b, ef(j + 1, r), 0.5 * Rp * mesh.left_trace(r));
        t.emplace_back(row_b, phi(j + 1, r), -beta * Rp * mesh.left_trace(r));
        t.emplace_back(row_b, phi(j, r), beta * Rp * mesh.right_trace(r));
        // left interface j-1/2: minus side cell j-1, plus side cell j
        t.emplace_back(row_b, ef(j - 1, r), -0.5 * Lp * mesh.right_trace(r));
        t.emplace_back(row_b, ef(j, r), -0.5 * Lp * mesh.left_trace(r));
        t.emplace_back(row_b, phi(j, r), beta * Lp * mesh.left_trace(r));
        t.emplace_back(row_b, phi(j - 1, r), -beta * Lp * mesh.right_trace(r));
      }
    }
  const int lam = 2 * nd;
  const double sh = std::sqrt(mesh.h());
  for (int j = 0; j < nc; ++j) {
    t.emplace_back(lam, phi(j, 0), sh);
    t.emplace_back(e0 + j * nl, lam, sh);
  }
}

LdgPoisson::LdgPoisson(const DGMesh& mesh, double beta) : mesh_(mesh), beta_(beta) {
  require(beta > 0.0, "LdgPoisson: beta must be positive");
  std::vector<Eigen::Triplet<double>> t;
  ldg_triplets(mesh, beta, t);
  const int n = size();
  matrix_.resize(n, n);
  matrix_.setFromTriplets(t.begin(), t.end());
  matrix_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->analyzePattern(matrix_);
  lu_->factorize(matrix_);
  if (lu_->info() != Eigen::Success) throw Error(ErrorKind::singular_system, "LDG Poisson matrix is singular");
}

FieldSolution LdgPoisson::solve(const DGFunction& rhs, double reference_scale) const {
  const int nd = mesh_.n_dofs();
  require(static_cast<int>(rhs.coeffs.size()) == nd, "LdgPoisson::solve: rhs size mismatch");
  const double total = integral(mesh_, rhs.span());
  const double norm = l2_norm(rhs.span());
  if (std::abs(total) > 1e-10 * std::max(norm, reference_scale))
    throw Error(ErrorKind::compatibility, "Poisson right-hand side has nonzero mean: integral = " + std::to_string(total));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size());
  for (int i = 0; i < nd; ++i) b[nd + i] = rhs.coeffs[i];
  Eigen::VectorXd x = lu_->solve(b);
  const double res = (matrix_ * x - b).norm();
  if (!(res <= 1e-12 * b.norm() + 1e-14))
    throw Error(ErrorKind::singular_system, "LDG Poisson solve residual " + std::to_string(res));
  FieldSolution out{DGFunction(mesh_), DGFunction(mesh_)};
  for (int i = 0; i < nd; ++i) {
    out.phi.coeffs[i] = x[i];
    out.efield.coeffs[i] = x[nd + i];
  }
  return out;
}

FieldSolution solve_poisson_ldg(const DGMesh& mesh, const DGFunction& rhs, double beta) {
  return LdgPoisson(mesh, beta).solve(rhs);
}

double field_energy(const FieldSolution& field) {
  double s = l2_norm(field.efield.span());
  return 0.5 * s * s;
}

double jump_energy(const DGMesh& mesh, const FieldSolution& field, double beta) {
  double s = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    double d = jump(mesh, field.phi.span(), i);
    s += d * d;
  }
  return 0.5 * beta * s;
}

}  // namespace vpfp
