#include "vpfp/hermite_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vpfp/errors.hpp"
#include "vpfp/quadrature.hpp"

namespace vpfp {

double eval_probabilist_hermite(int k, double x) {
  require(k >= 0, "eval_probabilist_hermite: negative degree");
  double jm = 0.0, j = 1.0;
  for (int n = 0; n < k; ++n) {
    double jp = (x * j - std::sqrt(double(n)) * jm) / std::sqrt(double(n + 1));
    jm = j;
    j = jp;
  }
  return j;
}

HermiteBasis::HermiteBasis(int n_modes, double v_th) : n_modes_(n_modes), v_th_(v_th) {
  require(n_modes >= 3, "HermiteBasis: need at least three modes");
  require(v_th > 0.0 && std::isfinite(v_th), "HermiteBasis: v_th must be positive");
}

double HermiteBasis::psi(int k, double v) const {
  require(k >= 0, "HermiteBasis::psi: negative index");
  const double s = v / v_th_;
  double pm = 0.0, p = std::exp(-0.5 * s * s) / (std::sqrt(2.0 * std::numbers::pi) * v_th_);
  for (int n = 0; n < k; ++n) {
    double pp = (s * p - std::sqrt(double(n)) * pm) / std::sqrt(double(n + 1));
    pm = p;
    p = pp;
  }
  return p;
}

void HermiteBasis::psi_all(double v, std::span<double> out) const {
  if (out.empty()) return;
  const double s = v / v_th_;
  out[0] = std::exp(-0.5 * s * s) / (std::sqrt(2.0 * std::numbers::pi) * v_th_);
  if (out.size() > 1) out[1] = s * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n)
    out[n + 1] = (s * out[n] - std::sqrt(double(n)) * out[n - 1]) / std::sqrt(double(n + 1));
}

double eval_basis_function(const HermiteBasis& basis, int k, double v) { return basis.psi(k, v); }

HermiteCoefficients::HermiteCoefficients(int n_modes, const DGMesh& mesh)
    : n_modes_(n_modes),
      n_cells_(mesh.n_cells()),
      n_local_(mesh.n_local()),
      data_(static_cast<std::size_t>(n_modes) * mesh.n_dofs(), 0.0),
      mask_(n_modes, 1) {}

int HermiteCoefficients::active_count() const {
  return static_cast<int>(std::count(mask_.begin(), mask_.end(), 1));
}

void HermiteCoefficients::zero_inactive() {
  for (int k = 0; k < n_modes_; ++k)
    if (!active(k)) std::fill(mode(k).begin(), mode(k).end(), 0.0);
}

int projection_nodes(int n_modes) { return std::max(2 * n_modes, 64); }

namespace {

// alpha_k = v_th sum_i w_i/M(s_i) f0(v_th s_i) J_k(s_i), with J_k M^{1/2} from the Hermite-function recurrence
std::vector<double> project_point(const HermiteBasis& basis, const HermiteRule& rule, const PhaseSpaceFunction& f0,
                                  double x) {
  const int n = basis.n_modes();
  std::vector<double> alpha(n, 0.0);
  const double e0 = std::pow(2.0 * std::numbers::pi, -0.25);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes[i];
    const double f = f0(x, basis.v_th() * s);
    if (!std::isfinite(f))
      throw Error(ErrorKind::quadrature_overflow, "initial data is not finite at x=" + std::to_string(x) +
                                                      ", v=" + std::to_string(basis.v_th() * s));
    if (f == 0.0) continue;
    // J_k = h_k / sqrt(M) with h_k = J_k sqrt(M), sqrt(M) = e0 exp(-s^2/4)
    const double scale = basis.v_th() * rule.scaled[i] * f * std::exp(0.25 * s * s) / e0;
    double hm = 0.0, h = e0 * std::exp(-0.25 * s * s);
    for (int k = 0; k < n; ++k) {
      alpha[k] += scale * h;
      double hp = (s * h - std::sqrt(double(k)) * hm) / std::sqrt(double(k + 1));
      hm = h;
      h = hp;
    }
  }
  return alpha;
}

}  // namespace

std::vector<double> hermite_coefficients_at(const HermiteBasis& basis, const PhaseSpaceFunction& f0, double x) {
  return project_point(basis, gauss_hermite(projection_nodes(basis.n_modes())), f0, x);
}

HermiteCoefficients project_initial_data(const HermiteBasis& basis, const PhaseSpaceFunction& f0, const DGMesh& mesh) {
  const int n = basis.n_modes();
  const auto rule = gauss_hermite(projection_nodes(n));
  const auto gl = gauss_legendre(std::max(mesh.order() + 2, 10));
  HermiteCoefficients out(n, mesh);
  const int nl = mesh.n_local();
  const double h = mesh.h();
  for (int j = 0; j < mesh.n_cells(); ++j)
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double x = mesh.cell_center(j) + 0.5 * h * gl.nodes[q];
      const auto alpha = project_point(basis, rule, f0, x);
      for (int p = 0; p < nl; ++p) {
        const double w = 0.5 * h * gl.weights[q] * mesh.basis_value(p, gl.nodes[q]);
        for (int k = 0; k < n; ++k) out.mode(k)[j * nl + p] += w * alpha[k];
      }
    }
  return out;
}

double reconstruct_distribution(const HermiteBasis& basis, const DGMesh& mesh, const HermiteCoefficients& coeffs,
                                double x, double v) {
  std::vector<double> psi(coeffs.n_modes());
  basis.psi_all(v, psi);
  double xi;
  const int cell = mesh.locate(x, xi);
  double f = 0.0;
  for (int k = 0; k < coeffs.n_modes(); ++k)
    if (coeffs.active(k)) f += psi[k] * evaluate_cell(mesh, coeffs.mode(k), cell, xi);
  return f;
}

}  // namespace vpfp
