#include "vpfp/limit_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vpfp/errors.hpp"

namespace vpfp {

double discrete_field_energy(const DGMesh& mesh, const FieldSolution& field, double beta) {
  return field_energy(field) + jump_energy(mesh, field, beta);
}

PoissonBoltzmannSolver::PoissonBoltzmannSolver(const DGMesh& mesh, const DGFunction& n_i, double beta,
                                               NewtonOptions options)
    : mesh_(mesh), n_i_(n_i), beta_(beta), options_(options) {
  require(beta > 0.0, "PoissonBoltzmannSolver: beta must be positive");
  require(static_cast<int>(n_i.coeffs.size()) == mesh.n_dofs(), "PoissonBoltzmannSolver: density size mismatch");
  ldg_triplets(mesh_, beta_, base_);
  const int n = 2 * mesh_.n_dofs() + 1;
  K_.resize(n, n);
  K_.setFromTriplets(base_.begin(), base_.end());
  last_ = Eigen::VectorXd::Zero(n);
}

// Residual of the LDG system with the Boltzmann term; a receives (e^{phi/T}, zeta_r)/Z,
// eq the scaled exponentials at quadrature nodes, scale the factor N/(Z T) for the reaction block.
Eigen::VectorXd PoissonBoltzmannSolver::residual(const Eigen::VectorXd& z, double T, double N, Eigen::VectorXd* a,
                                                 std::vector<double>* eq, double* scale) const {
  const int nc = mesh_.n_cells(), nl = mesh_.n_local(), nq = mesh_.n_quad(), nd = mesh_.n_dofs();
  std::vector<double> e(static_cast<std::size_t>(nc) * nq);
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < nc; ++j)
    for (int q = 0; q < nq; ++q) {
      double s = 0.0;
      for (int p = 0; p < nl; ++p) s += z[j * nl + p] * mesh_.basis_at_quad(q, p);
      e[j * nq + q] = s / T;
      mx = std::max(mx, s / T);
    }
  double Z = 0.0;
  for (int j = 0; j < nc; ++j)
    for (int q = 0; q < nq; ++q) {
      e[j * nq + q] = std::exp(e[j * nq + q] - mx);
      Z += mesh_.quad_weight(q) * e[j * nq + q];
    }
  Eigen::VectorXd av = Eigen::VectorXd::Zero(nd);
  for (int j = 0; j < nc; ++j)
    for (int p = 0; p < nl; ++p) {
      double s = 0.0;
      for (int q = 0; q < nq; ++q) s += mesh_.quad_weight(q) * e[j * nq + q] * mesh_.basis_at_quad(q, p);
      av[j * nl + p] = s / Z;
    }
  Eigen::VectorXd r = K_ * z;
  for (int i = 0; i < nd; ++i) r[nd + i] += N * av[i] - n_i_.coeffs[i];
  if (a) *a = av;
  if (eq) *eq = std::move(e);
  if (scale) *scale = N / (Z * T);
  return r;
}

PoissonBoltzmannResult PoissonBoltzmannSolver::solve(double T, double N, const DGFunction* initial_phi) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::precondition, "Poisson-Boltzmann: T must be positive");
  require(N > 0.0, "Poisson-Boltzmann: N must be positive");
  const double total = integral(mesh_, n_i_.span());
  require(std::abs(total - N) <= 1e-10 * std::abs(N), "Poisson-Boltzmann: int n_i differs from N");

  const int nc = mesh_.n_cells(), nl = mesh_.n_local(), nq = mesh_.n_quad(), nd = mesh_.n_dofs();
  const int n = 2 * nd + 1;
  Eigen::VectorXd z = last_;
  if (initial_phi) {
    z.setZero();
    for (int i = 0; i < nd; ++i) z[i] = initial_phi->coeffs[i];
  }
  history_.clear();

  Eigen::VectorXd a;
  std::vector<double> eq;
  double scale = 0.0;
  Eigen::VectorXd r = residual(z, T, N, &a, &eq, &scale);
  double rn = r.norm();
  int it = 0;
  for (; it < options_.max_iterations && rn > options_.tolerance; ++it) {
    history_.push_back(rn);
    // A = K + reaction block; J = A - (N/T) u w^T, u = a in Gauss rows, w = a in phi columns
    std::vector<Eigen::Triplet<double>> t = base_;
    for (int j = 0; j < nc; ++j)
      for (int p = 0; p < nl; ++p)
        for (int s = 0; s < nl; ++s) {
          double v = 0.0;
          for (int q = 0; q < nq; ++q)
            v += mesh_.quad_weight(q) * eq[j * nq + q] * mesh_.basis_at_quad(q, p) * mesh_.basis_at_quad(q, s);
          t.emplace_back(nd + j * nl + p, j * nl + s, scale * v);
        }
    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    A.makeCompressed();
    if (!analyzed_) {
      lu_.analyzePattern(A);
      analyzed_ = true;
    }
    lu_.factorize(A);
    if (lu_.info() != Eigen::Success) throw Error(ErrorKind::singular_system, "Poisson-Boltzmann Jacobian is singular");
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    u.segment(nd, nd) = a;
    Eigen::VectorXd x = lu_.solve(-r);
    Eigen::VectorXd y = lu_.solve(u);
    const double gamma = N / T;
    const double denom = 1.0 - gamma * a.dot(y.head(nd));
    Eigen::VectorXd step = x + y * (gamma * a.dot(x.head(nd)) / denom);

    double lambda = 1.0;
    bool accepted = false;
    for (int hv = 0; hv <= options_.max_halvings; ++hv, lambda *= 0.5) {
      Eigen::VectorXd trial = z + lambda * step;
      Eigen::VectorXd at;
      std::vector<double> et;
      double st = 0.0;
      Eigen::VectorXd rt = residual(trial, T, N, &at, &et, &st);
      const double tn = rt.norm();
      if (std::isfinite(tn) && tn < rn) {
        z = std::move(trial);
        r = std::move(rt);
        a = std::move(at);
        eq = std::move(et);
        scale = st;
        rn = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  history_.push_back(rn);
  if (!(rn <= 1e-10))
    throw Error(ErrorKind::nonconvergence, "Poisson-Boltzmann Newton did not converge at T=" + std::to_string(T) +
                                               ", residual " + std::to_string(rn));
  last_ = z;

  PoissonBoltzmannResult out;
  out.field = {DGFunction(mesh_), DGFunction(mesh_)};
  out.n_e = DGFunction(mesh_);
  for (int i = 0; i < nd; ++i) {
    out.field.phi.coeffs[i] = z[i];
    out.field.efield.coeffs[i] = z[nd + i];
    out.n_e.coeffs[i] = N * a[i];
  }
  // c = N / int exp(phi/T), recovered from the unscaled exponential sum
  double mx = -std::numeric_limits<double>::infinity(), Z = 0.0;
  std::vector<double> s(static_cast<std::size_t>(nc) * nq);
  for (int j = 0; j < nc; ++j)
    for (int q = 0; q < nq; ++q) {
      s[j * nq + q] = value_at_quad(mesh_, out.field.phi.span(), j, q) / T;
      mx = std::max(mx, s[j * nq + q]);
    }
  for (int j = 0; j < nc; ++j)
    for (int q = 0; q < nq; ++q) Z += mesh_.quad_weight(q) * std::exp(s[j * nq + q] - mx);
  out.c = N / Z * std::exp(-mx);
  out.residual = rn;
  out.iterations = it;
  return out;
}

double PoissonBoltzmannSolver::energy_of_temperature(const EnergyBudget& budget, double T,
                                                     PoissonBoltzmannResult* out) {
  auto res = solve(T, budget.particle_number);
  const double e = 0.5 * budget.particle_number * T + discrete_field_energy(mesh_, res.field, beta_) + budget.ion_energy;
  if (out) *out = std::move(res);
  return e;
}

LimitState PoissonBoltzmannSolver::find_limit_temperature(const EnergyBudget& budget, std::optional<double> hint,
                                                          double rel_tol) {
  constexpr double t_min = 1e-12, t_max = 1e8;
  const double target = budget.total_energy;
  if (!(target > budget.ion_energy))
    throw Error(ErrorKind::bracket_failure, "energy budget does not exceed the ion energy");

  PoissonBoltzmannResult best;
  double best_T = 0.0, best_err = std::numeric_limits<double>::infinity();
  auto eval = [&](double T) {
    PoissonBoltzmannResult r;
    double e;
    try {
      e = energy_of_temperature(budget, T, &r) - target;
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::nonconvergence)
        throw Error(ErrorKind::bracket_failure, std::string("limit solve failed while bracketing: ") + err.what());
      throw;
    }
    if (std::abs(e) < best_err) {
      best_err = std::abs(e);
      best_T = T;
      best = std::move(r);
    }
    return e;
  };

  double T0 = hint.value_or(1.0);
  T0 = std::clamp(T0, t_min, t_max);
  double ratio = hint ? 1.0 + 1e-6 : 2.0;
  double lo, hi, flo, fhi;
  double f0 = eval(T0);
  if (std::abs(f0) <= rel_tol * std::abs(target)) {
    lo = hi = T0;
    flo = fhi = f0;
  } else if (f0 < 0.0) {
    lo = T0, flo = f0;
    for (;;) {
      hi = std::min(lo * ratio, t_max);
      fhi = eval(hi);
      if (fhi >= 0.0) break;
      if (hi >= t_max) throw Error(ErrorKind::bracket_failure, "E(T) stays below the budget up to T=1e8");
      lo = hi, flo = fhi;
      ratio *= ratio;
    }
  } else {
    hi = T0, fhi = f0;
    for (;;) {
      lo = std::max(hi / ratio, t_min);
      flo = eval(lo);
      if (flo <= 0.0) break;
      if (lo <= t_min) throw Error(ErrorKind::bracket_failure, "E(T) exceeds the budget down to T=1e-12");
      hi = lo, fhi = flo;
      ratio *= ratio;
    }
  }

  int side = 0;
  for (int it = 0; it < 200 && best_err > rel_tol * std::abs(target) && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    double T = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(T > lo && T < hi)) T = 0.5 * (lo + hi);
    const double f = eval(T);
    if (f < 0.0) {
      lo = T, flo = f;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = T, fhi = f;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }

  for (int i = 0; i < mesh_.n_dofs(); ++i) {
    last_[i] = best.field.phi.coeffs[i];
    last_[mesh_.n_dofs() + i] = best.field.efield.coeffs[i];
  }
  LimitState out;
  out.T_bar = best_T;
  out.c = best.c;
  out.phi_bar = best.field.phi;
  out.n_e_bar = best.n_e;
  out.field = std::move(best.field);
  return out;
}

PoissonBoltzmannResult solve_poisson_boltzmann(const DGMesh& mesh, const DGFunction& n_i, double T, double N) {
  PoissonBoltzmannSolver s(mesh, n_i, default_penalty(mesh));
  return s.solve(T, N);
}

double energy_of_temperature(const DGMesh& mesh, const DGFunction& n_i, const EnergyBudget& budget, double T) {
  PoissonBoltzmannSolver s(mesh, n_i, default_penalty(mesh));
  return s.energy_of_temperature(budget, T);
}

LimitState find_limit_temperature(const DGMesh& mesh, const DGFunction& n_i, const EnergyBudget& budget) {
  PoissonBoltzmannSolver s(mesh, n_i, default_penalty(mesh));
  return s.find_limit_temperature(budget);
}

VthTracker::VthTracker(const DGMesh& mesh, const DGFunction& n_i, double beta, EnergyBudget budget, double resolve_tol)
    : solver_(mesh, n_i, beta), budget_(budget), resolve_tol_(resolve_tol) {
  exact(budget.ion_energy);
  v_th_ = std::sqrt(limit_.T_bar);
}

void VthTracker::exact(double ion_energy) {
  budget_.ion_energy = ion_energy;
  std::optional<double> hint;
  if (limit_.T_bar > 0.0) hint = limit_.T_bar;
  limit_ = solver_.find_limit_temperature(budget_, hint);
  anchor_energy_ = ion_energy;
  // dT/dW_i = -1 / E'(T)
  const double dT = 1e-6 * limit_.T_bar;
  const double e1 = solver_.energy_of_temperature(budget_, limit_.T_bar + dT);
  const double e0 = solver_.energy_of_temperature(budget_, limit_.T_bar - dT);
  slope_ = (e1 - e0) / (2.0 * dT);
}

std::pair<double, double> VthTracker::update(double ion_energy, double dt) {
  const double old = v_th_;
  if (std::abs(ion_energy - anchor_energy_) > resolve_tol_ * std::abs(budget_.total_energy)) exact(ion_energy);
  const double T = limit_.T_bar - (ion_energy - anchor_energy_) / slope_;
  v_th_ = std::sqrt(T);
  double rate = 0.0;
  if (started_) rate = (v_th_ - old) / (dt * 0.5 * (v_th_ + old));
  started_ = true;
  return {v_th_, rate};
}

}  // namespace vpfp
