// Dense reference for one Crank-Nicolson step of the Hermite-DG system (order 2 only).
// Written against the weak form directly: own quadrature, own basis, dense LDG
// matrix, and Newton with a finite-difference Jacobian on the full nonlinear system.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct StepProblem {
  int n_cells = 16;
  int n_modes = 16;
  double length = 12.0;
  double v_th = 1.0;  // midpoint scaling velocity
  double rate = 0.0;  // v_th'/v_th
  double eps = 1.0;
  double dt = 0.002;
  double nu_ee = 0.0;
  double nu_ei = 0.0;
  double ion_T = 0.0;
  double delta = 0.0;
  double beta = 1.0;
  std::vector<double> n_i;    // n_cells * 3 Legendre coefficients
  std::vector<double> alpha;  // n_modes * n_cells * 3, mode-major
};

class DenseStep {
 public:
  explicit DenseStep(const StepProblem& p) : p_(p), nc_(p.n_cells), nd_(3 * p.n_cells) {
    h_ = p.length / nc_;
    // 4-point Gauss-Legendre by Golub-Welsch
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    for (int i = 1; i < 4; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(J);
    for (int q = 0; q < 4; ++q) {
      xi_[q] = es.eigenvalues()(q);
      wq_[q] = 2.0 * es.eigenvectors()(0, q) * es.eigenvectors()(0, q);
    }
    build_poisson();
  }

  // phi_p and phi_p' on [-1, 1] for the physical cell of width h, orthonormal on the cell
  double b(int p, double s) const {
    const double c = std::sqrt((2 * p + 1) / h_);
    return c * (p == 0 ? 1.0 : p == 1 ? s : 0.5 * (3 * s * s - 1));
  }
  double db(int p, double s) const {
    const double c = std::sqrt((2 * p + 1) / h_) * 2.0 / h_;
    return c * (p == 0 ? 0.0 : p == 1 ? 1.0 : 3 * s);
  }
  double val(const double* c, int j, double s) const {
    double v = 0.0;
    for (int p = 0; p < 3; ++p) v += c[3 * j + p] * b(p, s);
    return v;
  }

  /** Electric field coefficients from the electron density a0. */
  Eigen::VectorXd efield(const double* a0) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nd_ + 1);
    for (int i = 0; i < nd_; ++i) rhs(nd_ + i) = p_.n_i[i] - a0[i];
    const Eigen::VectorXd z = lu_.solve(rhs);
    return z.segment(nd_, nd_);
  }
  Eigen::VectorXd potential(const double* a0) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nd_ + 1);
    for (int i = 0; i < nd_; ++i) rhs(nd_ + i) = p_.n_i[i] - a0[i];
    return lu_.solve(rhs).head(nd_);
  }

  /** eps (a1 - a0)/dt + transport + sources, all at the midpoint (a0 + a1)/2. */
  Eigen::VectorXd residual(const Eigen::VectorXd& a1) const {
    const int nh = p_.n_modes;
    Eigen::VectorXd y(a1.size());
    for (int i = 0; i < a1.size(); ++i) y(i) = 0.5 * (a1(i) + p_.alpha[i]);
    Eigen::VectorXd R(a1.size());
    for (int i = 0; i < a1.size(); ++i) R(i) = p_.eps * (a1(i) - p_.alpha[i]) / p_.dt;
    const double v = p_.v_th;
    const Eigen::VectorXd E = efield(y.data());
    auto A = [&](int k) -> const double* { return y.data() + static_cast<std::size_t>(k) * nd_; };
    auto g_at = [&](int k, int j, double s) {
      double g = 0.0;
      if (k + 1 < nh) g += std::sqrt(k + 1.0) * val(A(k + 1), j, s);
      if (k > 0) g += std::sqrt(double(k)) * val(A(k - 1), j, s);
      return v * g;
    };
    for (int k = 0; k < nh; ++k) {
      const double dk = k == 0 ? 0.0 : p_.delta;
      for (int j = 0; j < nc_; ++j) {
        const int jr = (j + 1) % nc_, jl = (j + nc_ - 1) % nc_;
        // fluxes at the right and left edge of cell j
        const double gr = 0.5 * (g_at(k, j, 1) + g_at(k, jr, -1) - dk * (val(A(k), jr, -1) - val(A(k), j, 1)));
        const double gl = 0.5 * (g_at(k, jl, 1) + g_at(k, j, -1) - dk * (val(A(k), j, -1) - val(A(k), jl, 1)));
        for (int p = 0; p < 3; ++p) {
          double s = gr * b(p, 1) - gl * b(p, -1);
          for (int q = 0; q < 4; ++q) {
            const double w = 0.5 * h_ * wq_[q], x = xi_[q];
            s -= w * g_at(k, j, x) * db(p, x);
            const double a0 = val(A(0), j, x), a1v = val(A(1), j, x), a2 = val(A(2), j, x);
            const double ak = val(A(k), j, x);
            const double akm1 = k >= 1 ? val(A(k - 1), j, x) : 0.0;
            const double akm2 = k >= 2 ? val(A(k - 2), j, x) : 0.0;
            const double u = v * a1v / a0;
            const double T = v * v * (1.0 + std::sqrt(2.0) * a2 / a0 - (a1v / a0) * (a1v / a0));
            const double e2 = p_.eps * p_.eps;
            const double u_ei = 0.5 * u;
            const double T_ei = (T + e2 * p_.ion_T + 0.5 * u * u) / (1.0 + e2);
            const double Ex = val(E.data(), j, x);
            const double src =
                p_.eps * p_.rate * (k * ak + std::sqrt(double(k) * (k - 1)) * akm2) +
                std::sqrt(double(k)) * Ex / v * akm1 + (p_.nu_ee + p_.nu_ei) * k * ak -
                std::sqrt(double(k)) * (p_.nu_ee * u + p_.nu_ei * u_ei) / v * akm1 +
                (p_.nu_ee * (1 - T / (v * v)) + p_.nu_ei * (1 - T_ei / (v * v))) * std::sqrt(double(k) * (k - 1)) * akm2;
            s += w * src * b(p, x);
          }
          R(k * nd_ + 3 * j + p) += s;
        }
      }
    }
    return R;
  }

  /** Newton iteration with a central-difference Jacobian; returns alpha^{m+1}. */
  Eigen::VectorXd solve(int max_iter = 8) const {
    const int n = static_cast<int>(p_.alpha.size());
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(p_.alpha.data(), n);
    for (int it = 0; it < max_iter; ++it) {
      const Eigen::VectorXd F = residual(a);
      Eigen::MatrixXd Jm(n, n);
      for (int c = 0; c < n; ++c) {
        const double hh = 1e-6 * std::max(1.0, std::abs(a(c)));
        Eigen::VectorXd ap = a, am = a;
        ap(c) += hh;
        am(c) -= hh;
        Jm.col(c) = (residual(ap) - residual(am)) / (2 * hh);
      }
      const Eigen::VectorXd d = Jm.partialPivLu().solve(F);
      a -= d;
      if (d.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(1.0, a.lpNorm<Eigen::Infinity>())) break;
    }
    return a;
  }

 private:
  void build_poisson() {
    // unknowns (phi, E, lambda); jump [w] = w+ - w-
    const int N = 2 * nd_ + 1;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    auto P = [&](int j, int p) { return 3 * ((j + nc_) % nc_) + p; };
    const double beta = p_.beta;
    for (int j = 0; j < nc_; ++j)
      for (int r = 0; r < 3; ++r) {
        const int row1 = P(j, r), row2 = nd_ + P(j, r);
        for (int s = 0; s < 3; ++s) {
          double stiff = 0.0, mass = 0.0;
          for (int q = 0; q < 4; ++q) {
            stiff += 0.5 * h_ * wq_[q] * b(s, xi_[q]) * db(r, xi_[q]);
            mass += 0.5 * h_ * wq_[q] * b(s, xi_[q]) * b(r, xi_[q]);
          }
          // int phi psi' - phihat psi^-_{j+1/2} + phihat psi^+_{j-1/2} - int E psi = 0
          M(row1, P(j, s)) += stiff;
          M(row1, nd_ + P(j, s)) -= mass;
          M(row1, P(j, s)) -= 0.5 * b(s, 1) * b(r, 1);
          M(row1, P(j + 1, s)) -= 0.5 * b(s, -1) * b(r, 1);
          M(row1, P(j - 1, s)) += 0.5 * b(s, 1) * b(r, -1);
          M(row1, P(j, s)) += 0.5 * b(s, -1) * b(r, -1);
          // -int E zeta' + Ehat zeta^-_{j+1/2} - Ehat zeta^+_{j-1/2} + lambda int zeta = rhs
          M(row2, nd_ + P(j, s)) -= stiff;
          M(row2, nd_ + P(j, s)) += 0.5 * b(s, 1) * b(r, 1);
          M(row2, nd_ + P(j + 1, s)) += 0.5 * b(s, -1) * b(r, 1);
          M(row2, P(j + 1, s)) -= beta * b(s, -1) * b(r, 1);
          M(row2, P(j, s)) += beta * b(s, 1) * b(r, 1);
          M(row2, nd_ + P(j - 1, s)) -= 0.5 * b(s, 1) * b(r, -1);
          M(row2, nd_ + P(j, s)) -= 0.5 * b(s, -1) * b(r, -1);
          M(row2, P(j, s)) += beta * b(s, -1) * b(r, -1);
          M(row2, P(j - 1, s)) -= beta * b(s, 1) * b(r, -1);
        }
        double m0 = 0.0;
        for (int q = 0; q < 4; ++q) m0 += 0.5 * h_ * wq_[q] * b(r, xi_[q]);
        M(row2, 2 * nd_) += m0;
        M(2 * nd_, P(j, r)) += m0;
      }
    lu_ = M.fullPivLu();
  }

  StepProblem p_;
  int nc_, nd_;
  double h_;
  double xi_[4], wq_[4];
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

}  // namespace oracle
