#include "vpfp/dg_space.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/errors.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

double legendre(int p, double xi) {
  if (p == 0) return 1.0;
  double p0 = 1.0, p1 = xi;
  for (int k = 2; k <= p; ++k) {
    double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int p, double xi) {
  // P_p' = sum over q = p-1, p-3, ... of (2q+1) P_q
  double d = 0.0;
  for (int q = p - 1; q >= 0; q -= 2) d += (2 * q + 1) * legendre(q, xi);
  return d;
}

DGMesh::DGMesh(int n_cells, double length, int order) : n_cells_(n_cells), length_(length), order_(order) {
  require(n_cells >= 1, "DGMesh: n_cells must be positive");
  require(length > 0.0, "DGMesh: length must be positive");
  require(order >= 0, "DGMesh: order must be nonnegative");
  const int nl = order + 1;
  auto rule = gauss_legendre(order + 2);
  const int nq = static_cast<int>(rule.nodes.size());
  quad_xi_ = rule.nodes;
  quad_w_.resize(nq);
  for (int q = 0; q < nq; ++q) quad_w_[q] = 0.5 * h() * rule.weights[q];
  vals_.resize(nq * nl);
  for (int q = 0; q < nq; ++q)
    for (int p = 0; p < nl; ++p) vals_[q * nl + p] = basis_value(p, quad_xi_[q]);
  right_.resize(nl);
  left_.resize(nl);
  for (int p = 0; p < nl; ++p) {
    right_[p] = basis_value(p, 1.0);
    left_[p] = basis_value(p, -1.0);
  }
  stiff_.assign(nl * nl, 0.0);
  for (int p = 0; p < nl; ++p)
    for (int r = 0; r < nl; ++r) {
      double s = 0.0;
      for (int q = 0; q < nq; ++q) s += quad_w_[q] * vals_[q * nl + r] * basis_derivative(p, quad_xi_[q]);
      stiff_[p * nl + r] = s;
    }
}

double DGMesh::basis_value(int p, double xi) const { return std::sqrt((2 * p + 1) / h()) * legendre(p, xi); }

double DGMesh::basis_derivative(int p, double xi) const {
  return 2.0 / h() * std::sqrt((2 * p + 1) / h()) * legendre_derivative(p, xi);
}

int DGMesh::locate(double x, double& xi) const {
  double y = std::fmod(x, length_);
  if (y < 0.0) y += length_;
  int cell = std::min(static_cast<int>(y / h()), n_cells_ - 1);
  xi = 2.0 * (y - cell_center(cell)) / h();
  xi = std::clamp(xi, -1.0, 1.0);
  return cell;
}

DGFunction project(const DGMesh& mesh, const std::function<double(double)>& fn) {
  DGFunction out(mesh);
  auto rule = gauss_legendre(std::max(mesh.order() + 2, 10));
  const double h = mesh.h();
  for (int j = 0; j < mesh.n_cells(); ++j)
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      double x = mesh.cell_center(j) + 0.5 * h * rule.nodes[q];
      double fx = fn(x);
      for (int p = 0; p < mesh.n_local(); ++p) out(j, p) += 0.5 * h * rule.weights[q] * fx * mesh.basis_value(p, rule.nodes[q]);
    }
  return out;
}

double evaluate_cell(const DGMesh& mesh, std::span<const double> c, int cell, double xi) {
  double s = 0.0;
  for (int p = 0; p < mesh.n_local(); ++p) s += c[cell * mesh.n_local() + p] * mesh.basis_value(p, xi);
  return s;
}

double evaluate(const DGMesh& mesh, std::span<const double> c, double x) {
  double xi;
  int cell = mesh.locate(x, xi);
  return evaluate_cell(mesh, c, cell, xi);
}

double value_at_quad(const DGMesh& mesh, std::span<const double> c, int cell, int q) {
  double s = 0.0;
  for (int p = 0; p < mesh.n_local(); ++p) s += c[cell * mesh.n_local() + p] * mesh.basis_at_quad(q, p);
  return s;
}

double cell_mean(const DGMesh& mesh, std::span<const double> c, int cell) {
  return c[cell * mesh.n_local()] / std::sqrt(mesh.h());
}

double integral(const DGMesh& mesh, std::span<const double> c) {
  double s = 0.0;
  for (int j = 0; j < mesh.n_cells(); ++j) s += c[j * mesh.n_local()];
  return s * std::sqrt(mesh.h());
}

double l2_norm(std::span<const double> c) {
  double s = 0.0;
  for (double v : c) s += v * v;
  return std::sqrt(s);
}

double linf_norm(const DGMesh& mesh, std::span<const double> c) {
  const int nl = mesh.n_local();
  double m = 0.0;
  for (int j = 0; j < mesh.n_cells(); ++j) {
    double r = 0.0, l = 0.0;
    for (int p = 0; p < nl; ++p) {
      r += c[j * nl + p] * mesh.right_trace(p);
      l += c[j * nl + p] * mesh.left_trace(p);
    }
    m = std::max({m, std::abs(r), std::abs(l)});
    for (int q = 0; q < mesh.n_quad(); ++q) m = std::max(m, std::abs(value_at_quad(mesh, c, j, q)));
  }
  return m;
}

double trace_minus(const DGMesh& mesh, std::span<const double> c, int interface) {
  int n = mesh.n_cells();
  int cell = ((interface - 1) % n + n) % n;
  double s = 0.0;
  for (int p = 0; p < mesh.n_local(); ++p) s += c[cell * mesh.n_local() + p] * mesh.right_trace(p);
  return s;
}

double trace_plus(const DGMesh& mesh, std::span<const double> c, int interface) {
  int n = mesh.n_cells();
  int cell = (interface % n + n) % n;
  double s = 0.0;
  for (int p = 0; p < mesh.n_local(); ++p) s += c[cell * mesh.n_local() + p] * mesh.left_trace(p);
  return s;
}

double jump(const DGMesh& mesh, std::span<const double> c, int interface) {
  return trace_plus(mesh, c, interface) - trace_minus(mesh, c, interface);
}

double average(const DGMesh& mesh, std::span<const double> c, int interface) {
  return 0.5 * (trace_plus(mesh, c, interface) + trace_minus(mesh, c, interface));
}

double numerical_flux(double g_minus, double g_plus, double a_minus, double a_plus, int k, double delta) {
  const double d = (k == 0) ? 0.0 : delta;
  return 0.5 * (g_minus + g_plus) - 0.5 * d * (a_plus - a_minus);
}

double default_viscosity(double v_th, int n_modes) { return v_th * std::sqrt(double(n_modes)); }

void transport_residual(const DGMesh& mesh, double v_th, double delta, int n_modes,
                        std::span<const double> alpha, int k, std::span<double> out) {
  require(k >= 0 && k < n_modes, "transport_residual: mode index out of range");
  const int nc = mesh.n_cells(), nl = mesh.n_local(), nd = mesh.n_dofs();
  std::vector<double> g(nd, 0.0);
  const double cp = (k + 1 < n_modes) ? v_th * std::sqrt(double(k + 1)) : 0.0;
  const double cm = v_th * std::sqrt(double(k));
  for (int i = 0; i < nd; ++i) {
    double s = 0.0;
    if (cp != 0.0) s += cp * alpha[(k + 1) * nd + i];
    if (k > 0) s += cm * alpha[(k - 1) * nd + i];
    g[i] = s;
  }
  std::span<const double> a = alpha.subspan(static_cast<std::size_t>(k) * nd, nd);
  std::vector<double> flux(nc + 1);
  for (int i = 0; i <= nc; ++i)
    flux[i] = numerical_flux(trace_minus(mesh, g, i), trace_plus(mesh, g, i), trace_minus(mesh, a, i),
                             trace_plus(mesh, a, i), k, delta);
  for (int j = 0; j < nc; ++j)
    for (int p = 0; p < nl; ++p) {
      double s = 0.0;
      for (int q = 0; q < nl; ++q) s -= mesh.stiffness(p, q) * g[j * nl + q];
      s += flux[j + 1] * mesh.right_trace(p) - flux[j] * mesh.left_trace(p);
      out[j * nl + p] = s;
    }
}

}  // namespace vpfp
