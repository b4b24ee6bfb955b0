#pragma once

#include <functional>
#include <span>
#include <vector>

namespace vpfp {

/**
 * Uniform periodic mesh of (0, L) with an orthonormal Legendre basis of
 * degree <= order in every cell:
 *   phi_p(x) = sqrt((2p+1)/h) P_p(xi),  xi = 2(x - x_c)/h.
 * Reference-element tables (quadrature, traces, stiffness) are shared by all cells.
 */
class DGMesh {
 public:
  DGMesh(int n_cells, double length, int order = 2);

  int n_cells() const { return n_cells_; }
  double length() const { return length_; }
  int order() const { return order_; }
  int n_local() const { return order_ + 1; }
  int n_dofs() const { return n_cells_ * (order_ + 1); }
  double h() const { return length_ / n_cells_; }

  /** Interface position x_{i+1/2} for i = 0..n_cells. */
  double node(int i) const { return i * h(); }
  double cell_center(int j) const { return (j + 0.5) * h(); }
  /** Cell containing x after periodic wrapping; returns the reference coordinate in xi. */
  int locate(double x, double& xi) const;

  int n_quad() const { return static_cast<int>(quad_xi_.size()); }
  double quad_xi(int q) const { return quad_xi_[q]; }
  /** Physical quadrature weight on one cell (reference weight times h/2). */
  double quad_weight(int q) const { return quad_w_[q]; }
  double quad_point(int cell, int q) const { return cell_center(cell) + 0.5 * h() * quad_xi_[q]; }
  /** phi_p at quadrature node q. */
  double basis_at_quad(int q, int p) const { return vals_[q * n_local() + p]; }
  double right_trace(int p) const { return right_[p]; }
  double left_trace(int p) const { return left_[p]; }
  /** int_I phi_q phi_p' dx. */
  double stiffness(int p, int q) const { return stiff_[p * n_local() + q]; }

  double basis_value(int p, double xi) const;
  double basis_derivative(int p, double xi) const;

 private:
  int n_cells_;
  double length_;
  int order_;
  std::vector<double> quad_xi_, quad_w_, vals_, right_, left_, stiff_;
};

/** Legendre polynomial P_p and its derivative on [-1, 1]. */
double legendre(int p, double xi);
double legendre_derivative(int p, double xi);

/** Piecewise polynomial stored as coeffs[cell * n_local + p]. */
struct DGFunction {
  int n_cells = 0;
  int n_local = 0;
  std::vector<double> coeffs;

  DGFunction() = default;
  explicit DGFunction(const DGMesh& mesh) : n_cells(mesh.n_cells()), n_local(mesh.n_local()), coeffs(mesh.n_dofs(), 0.0) {}

  std::span<double> span() { return coeffs; }
  std::span<const double> span() const { return coeffs; }
  double& operator()(int cell, int p) { return coeffs[cell * n_local + p]; }
  double operator()(int cell, int p) const { return coeffs[cell * n_local + p]; }
};

/** L2 projection onto the DG space with an accurate per-cell Gauss-Legendre rule. */
DGFunction project(const DGMesh& mesh, const std::function<double(double)>& fn);

double evaluate(const DGMesh& mesh, std::span<const double> c, double x);
double evaluate_cell(const DGMesh& mesh, std::span<const double> c, int cell, double xi);
double value_at_quad(const DGMesh& mesh, std::span<const double> c, int cell, int q);
double cell_mean(const DGMesh& mesh, std::span<const double> c, int cell);
double integral(const DGMesh& mesh, std::span<const double> c);
double l2_norm(std::span<const double> c);
/** Max of |u| over quadrature nodes and both traces of every cell. */
double linf_norm(const DGMesh& mesh, std::span<const double> c);
/** Trace u(x_{i+1/2}^-) from the left cell and u(x_{i+1/2}^+) from the right cell, periodic. */
double trace_minus(const DGMesh& mesh, std::span<const double> c, int interface);
double trace_plus(const DGMesh& mesh, std::span<const double> c, int interface);
double jump(const DGMesh& mesh, std::span<const double> c, int interface);
double average(const DGMesh& mesh, std::span<const double> c, int interface);

/** Lax-Friedrichs flux 0.5(g- + g+) - 0.5 delta_k (a+ - a-), with delta_0 = 0. */
double numerical_flux(double g_minus, double g_plus, double a_minus, double a_plus, int k, double delta);

/** Global Lax-Friedrichs viscosity v_th sqrt(N_H). */
double default_viscosity(double v_th, int n_modes);

/**
 * Weak transport term of Hermite mode k:
 *   -int_{I_j} g_k phi_p' + ghat_{j+1/2} phi_p(x^-) - ghat_{j-1/2} phi_p(x^+),
 * g_k = v_th (sqrt(k+1) a_{k+1} + sqrt(k) a_{k-1}), a_{N_H} = 0.
 * alpha holds n_modes consecutive DG coefficient blocks; out receives n_dofs values.
 */
void transport_residual(const DGMesh& mesh, double v_th, double delta, int n_modes,
                        std::span<const double> alpha, int k, std::span<double> out);

}  // namespace vpfp
