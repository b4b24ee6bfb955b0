#include "vpfp/collisions.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "vpfp/errors.hpp"

namespace vpfp {

MomentSet moments_from_coefficients(double v_th, double a0, double a1, double a2) {
  if (!(a0 > 0.0))
    throw Error(ErrorKind::nonpositive_density, "nonpositive density a0 = " + std::to_string(a0));
  MomentSet m;
  const double r1 = a1 / a0;
  m.n = a0;
  m.u = v_th * r1;
  m.T = v_th * v_th * (1.0 + std::sqrt(2.0) * a2 / a0 - r1 * r1);
  m.w = 0.5 * v_th * v_th * (a0 + std::sqrt(2.0) * a2);
  return m;
}

MomentSet moments_from_coefficients(const HermiteBasis& basis, double a0, double a1, double a2) {
  return moments_from_coefficients(basis.v_th(), a0, a1, a2);
}

MomentSet maxwellian_moments(double n, double u, double T) { return {n, u, T, 0.5 * n * T + 0.5 * n * u * u}; }

MixedQuantities mixed_quantities(const MomentSet& e, const MomentSet& i, double eps, double nu_ee, double nu_ei) {
  MixedQuantities mix;
  const double du = e.u - eps * i.u;
  mix.u_ei = 0.5 * (e.u + eps * i.u);
  mix.T_ei = (e.T + eps * eps * i.T + 0.5 * du * du) / (1.0 + eps * eps);
  mix.eps = eps;
  mix.nu_ee = nu_ee;
  mix.nu_ei = nu_ei;
  return mix;
}

double collision_source(double v_th, std::span<const double> alpha, const MixedQuantities& mix,
                        const MomentSet& moments, int k) {
  if (k == 0) return 0.0;
  const double nu = mix.nu_ee + mix.nu_ei;
  double q = nu * k * alpha[k];
  q -= std::sqrt(double(k)) * (mix.nu_ee * moments.u + mix.nu_ei * mix.u_ei) / v_th * alpha[k - 1];
  if (k >= 2) {
    const double v2 = v_th * v_th;
    const double c = mix.nu_ee * (1.0 - moments.T / v2) + mix.nu_ei * (1.0 - mix.T_ei / v2);
    q += c * std::sqrt(double(k) * (k - 1)) * alpha[k - 2];
  }
  return q;
}

double collision_source(const HermiteBasis& basis, std::span<const double> alpha, const MixedQuantities& mix,
                        const MomentSet& moments, int k) {
  return collision_source(basis.v_th(), alpha, mix, moments, k);
}

double inertial_source(const HermiteBasis&, double vth_dot_over_vth, std::span<const double> alpha, int k) {
  if (k == 0 || vth_dot_over_vth == 0.0) return 0.0;
  double s = k * alpha[k];
  if (k >= 2) s += std::sqrt(double(k) * (k - 1)) * alpha[k - 2];
  return vth_dot_over_vth * s;
}

EntropyQuantities entropy_quantities(const HermiteBasis& basis, const DGMesh& mesh, const HermiteCoefficients& coeffs,
                                     double eps, double nu_ee, double nu_ei, double ion_T, const VelocityGrid& grid) {
  require(grid.points >= 2 && grid.half_width > 0.0, "entropy_quantities: invalid velocity grid");
  const int nh = coeffs.n_modes();
  const int nv = grid.points;
  const double vth = basis.v_th();
  const double width = grid.half_width * vth;
  const double dv = 2.0 * width / (nv - 1);

  // psi_k and psi_k' = -sqrt(k+1) psi_{k+1} / v_th on the grid
  std::vector<double> psi(static_cast<std::size_t>(nv) * nh), dpsi(static_cast<std::size_t>(nv) * nh), row(nh + 1);
  std::vector<double> vgrid(nv), vweight(nv, dv);
  vweight.front() = vweight.back() = 0.5 * dv;
  for (int m = 0; m < nv; ++m) {
    vgrid[m] = -width + m * dv;
    basis.psi_all(vgrid[m], row);
    for (int k = 0; k < nh; ++k) {
      psi[m * nh + k] = row[k];
      dpsi[m * nh + k] = -std::sqrt(double(k + 1)) * row[k + 1] / vth;
    }
  }

  EntropyQuantities out;
  long excluded = 0, total = 0;
  std::vector<double> a(nh);
  const MomentSet ion = maxwellian_moments(1.0, 0.0, ion_T);
  for (int j = 0; j < mesh.n_cells(); ++j)
    for (int q = 0; q < mesh.n_quad(); ++q) {
      for (int k = 0; k < nh; ++k) a[k] = coeffs.active(k) ? value_at_quad(mesh, coeffs.mode(k), j, q) : 0.0;
      const MomentSet mo = moments_from_coefficients(vth, a[0], a[1], a[2]);
      const MixedQuantities mix = mixed_quantities(mo, ion, eps, nu_ee, nu_ei);
      const double wx = mesh.quad_weight(q);
      double h = 0.0, d = 0.0;
      for (int m = 0; m < nv; ++m) {
        double f = 0.0, df = 0.0;
        for (int k = 0; k < nh; ++k) {
          f += a[k] * psi[m * nh + k];
          df += a[k] * dpsi[m * nh + k];
        }
        ++total;
        if (!(f > 0.0)) {
          ++excluded;
          continue;
        }
        const double v = vgrid[m];
        h += vweight[m] * f * std::log(f);
        double s = 0.0;
        if (nu_ee != 0.0) {
          const double g = df + (v - mo.u) * f / mo.T;
          s += nu_ee * mo.T * g * g / f;
        }
        if (nu_ei != 0.0) {
          const double g = df + (v - mix.u_ei) * f / mix.T_ei;
          s += nu_ei * mix.T_ei * g * g / f;
        }
        d += vweight[m] * s;
      }
      out.entropy += wx * h;
      out.dissipation += wx * d;
      if (nu_ei != 0.0)
        out.identity_rhs += wx * nu_ei * mo.n / mix.T_ei *
                            (eps * eps * (mo.T - ion_T) - (1.0 - eps * eps) * 0.25 * mo.u * mo.u) / (1.0 + eps * eps);
    }
  out.excluded_fraction = total > 0 ? double(excluded) / double(total) : 0.0;
  return out;
}

double entropy_dissipation_diagnostic(const HermiteBasis& basis, const DGMesh& mesh, const HermiteCoefficients& coeffs,
                                      double eps, double nu_ee, double nu_ei, double ion_T, const VelocityGrid& grid,
                                      double* excluded_fraction) {
  const auto e = entropy_quantities(basis, mesh, coeffs, eps, nu_ee, nu_ei, ion_T, grid);
  if (excluded_fraction) *excluded_fraction = e.excluded_fraction;
  return e.dissipation;
}

}  // namespace vpfp
