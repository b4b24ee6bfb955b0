#include "vpfp/kernels.hpp"

#include <cmath>
#include <string>

#include "vpfp/collisions.hpp"
#include "vpfp/errors.hpp"

namespace vpfp {

CnResidual::CnResidual(const DGMesh& mesh, int n_modes, const DGFunction& n_i, double beta)
    : mesh_(mesh), n_modes_(n_modes), n_i_(n_i), ni_norm_(l2_norm(n_i.span())), poisson_(mesh, beta) {
  require(mesh.order() <= 6, "CnResidual: polynomial order above 6 is not supported");
  const std::size_t nn = static_cast<std::size_t>(mesh.n_cells()) * mesh.n_quad();
  nodes_.resize(nn * n_modes);
  enodes_.resize(nn);
  c1_.resize(nn);
  c2_.resize(nn);
  xq_.resize(nn);
}

FieldSolution CnResidual::field(std::span<const double> y0) const {
  DGFunction rhs = n_i_;
  for (std::size_t i = 0; i < rhs.coeffs.size(); ++i) rhs.coeffs[i] -= y0[i];
  return poisson_.solve(rhs, ni_norm_);
}

void CnResidual::evaluate(std::span<const double> y, std::span<const double> alpha_old, const std::vector<char>& mask,
                          const CnParams& prm, std::span<double> out, ResidualInfo* info) {
  const int nh = n_modes_, nc = mesh_.n_cells(), nl = mesh_.n_local(), nq = mesh_.n_quad();
  const int nd = nc * nl;
  const double v = prm.v_th, v2 = v * v;
  const double nu = prm.nu_ee + prm.nu_ei;
  const double eps2 = prm.eps * prm.eps;

  // values of every active mode at the quadrature nodes
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nh; ++k)
    for (int j = 0; j < nc; ++j) {
      double* dst = &nodes_[(static_cast<std::size_t>(k) * nc + j) * nq];
      if (!mask[k]) {
        for (int q = 0; q < nq; ++q) dst[q] = 0.0;
        continue;
      }
      const double* c = &y[static_cast<std::size_t>(k) * nd + j * nl];
      for (int q = 0; q < nq; ++q) {
        double s = 0.0;
        for (int p = 0; p < nl; ++p) s += c[p] * mesh_.basis_at_quad(q, p);
        dst[q] = s;
      }
    }

  const FieldSolution fld = field(y.subspan(0, nd));
  for (int j = 0; j < nc; ++j)
    for (int q = 0; q < nq; ++q) enodes_[j * nq + q] = value_at_quad(mesh_, fld.efield.span(), j, q);

  // frozen moment coefficients at the nodes
  int bad_density = -1, negative_T = 0;
  double exchange = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : negative_T, exchange)
  for (int j = 0; j < nc; ++j)
    for (int q = 0; q < nq; ++q) {
      const int i = j * nq + q;
      const double a0 = nodes_[i], a1 = nodes_[nc * nq + i], a2 = nodes_[2 * nc * nq + i];
      if (!(a0 > 0.0)) {
#pragma omp critical
        bad_density = i;
        c1_[i] = c2_[i] = 0.0;
        continue;
      }
      const double r1 = a1 / a0;
      const double u = v * r1;
      const double T = v2 * (1.0 + std::sqrt(2.0) * a2 / a0 - r1 * r1);
      if (T < 0.0) ++negative_T;
      const double du = u;  // ions at rest
      const double u_ei = 0.5 * u;
      const double T_ei = (T + eps2 * prm.ion_T + 0.5 * du * du) / (1.0 + eps2);
      c1_[i] = (prm.nu_ee * u + prm.nu_ei * u_ei) / v;
      c2_[i] = prm.nu_ee * (1.0 - T / v2) + prm.nu_ei * (1.0 - T_ei / v2);
      if (prm.nu_ei != 0.0) {
        const double q2 = prm.nu_ei * (2.0 * a2 - std::sqrt(2.0) * u_ei / v * a1 + (1.0 - T_ei / v2) * std::sqrt(2.0) * a0);
        exchange += mesh_.quad_weight(q) * q2;
      }
    }
  if (bad_density >= 0)
    throw Error(ErrorKind::nonpositive_density,
                "nonpositive electron density at x=" + std::to_string(mesh_.quad_point(bad_density / nq, bad_density % nq)));

  const double mass = 2.0 * prm.eps / prm.dt;
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < nh; ++k)
    for (int j = 0; j < nc; ++j) {
      double* o = &out[static_cast<std::size_t>(k) * nd + j * nl];
      if (!mask[k]) {
        for (int p = 0; p < nl; ++p) o[p] = 0.0;
        continue;
      }
      const double cp = (k + 1 < nh && mask[k + 1]) ? v * std::sqrt(double(k + 1)) : 0.0;
      const double cm = (k > 0 && mask[k - 1]) ? v * std::sqrt(double(k)) : 0.0;
      const double dk = (k == 0) ? 0.0 : prm.delta;
      const int jl = (j + nc - 1) % nc, jr = (j + 1) % nc;
      auto gcoef = [&](int cell, int p) {
        double s = 0.0;
        if (cp != 0.0) s += cp * y[static_cast<std::size_t>(k + 1) * nd + cell * nl + p];
        if (cm != 0.0) s += cm * y[static_cast<std::size_t>(k - 1) * nd + cell * nl + p];
        return s;
      };
      const double* ak = &y[static_cast<std::size_t>(k) * nd];
      double g[8], gl_r = 0.0, gr_l = 0.0, g_r = 0.0, g_l = 0.0, a_r = 0.0, a_l = 0.0, al_r = 0.0, ar_l = 0.0;
      for (int p = 0; p < nl; ++p) {
        g[p] = gcoef(j, p);
        g_r += g[p] * mesh_.right_trace(p);
        g_l += g[p] * mesh_.left_trace(p);
        gl_r += gcoef(jl, p) * mesh_.right_trace(p);
        gr_l += gcoef(jr, p) * mesh_.left_trace(p);
        a_r += ak[j * nl + p] * mesh_.right_trace(p);
        a_l += ak[j * nl + p] * mesh_.left_trace(p);
        al_r += ak[jl * nl + p] * mesh_.right_trace(p);
        ar_l += ak[jr * nl + p] * mesh_.left_trace(p);
      }
      const double flux_r = 0.5 * (g_r + gr_l) - 0.5 * dk * (ar_l - a_r);
      const double flux_l = 0.5 * (gl_r + g_l) - 0.5 * dk * (a_l - al_r);

      const double sk = std::sqrt(double(k));
      const double skk = std::sqrt(double(k) * (k - 1));
      const std::size_t base = static_cast<std::size_t>(j) * nq;
      const double* yk = &nodes_[static_cast<std::size_t>(k) * nc * nq + base];
      const double* ykm = k >= 1 ? &nodes_[static_cast<std::size_t>(k - 1) * nc * nq + base] : nullptr;
      const double* ykmm = k >= 2 ? &nodes_[static_cast<std::size_t>(k - 2) * nc * nq + base] : nullptr;
      double src[8];
      for (int q = 0; q < nq; ++q) {
        const std::size_t i = base + q;
        double s = (prm.eps * prm.rate + nu) * k * yk[q];
        if (ykm) s += sk * (enodes_[i] / v - c1_[i]) * ykm[q];
        if (ykmm) s += (prm.eps * prm.rate + c2_[i]) * skk * ykmm[q];
        src[q] = mesh_.quad_weight(q) * s;
      }
      for (int p = 0; p < nl; ++p) {
        const std::size_t idx = static_cast<std::size_t>(k) * nd + j * nl + p;
        double r = mass * (y[idx] - alpha_old[idx]);
        for (int q = 0; q < nl; ++q) r -= mesh_.stiffness(p, q) * g[q];
        r += flux_r * mesh_.right_trace(p) - flux_l * mesh_.left_trace(p);
        for (int q = 0; q < nq; ++q) r += src[q] * mesh_.basis_at_quad(q, p);
        o[p] = r;
      }
    }

  if (info) {
    info->ion_exchange = exchange;
    info->negative_temperature_nodes = negative_T;
  }
}

void serial_cn_residual(const DGMesh& mesh, const LdgPoisson& poisson, const DGFunction& n_i, int n_modes,
                        std::span<const double> y, std::span<const double> alpha_old, const std::vector<char>& mask,
                        const CnParams& prm, std::span<double> out, ResidualInfo* info) {
  const int nc = mesh.n_cells(), nl = mesh.n_local(), nq = mesh.n_quad(), nd = mesh.n_dofs();
  const HermiteBasis basis(n_modes, prm.v_th);

  DGFunction rhs = n_i;
  for (int i = 0; i < nd; ++i) rhs.coeffs[i] -= y[i];
  const FieldSolution fld = poisson.solve(rhs, l2_norm(n_i.span()));

  std::vector<double> masked(y.begin(), y.end());
  for (int k = 0; k < n_modes; ++k)
    if (!mask[k])
      for (int i = 0; i < nd; ++i) masked[k * nd + i] = 0.0;

  std::vector<double> trans(nd);
  const MomentSet ion = maxwellian_moments(1.0, 0.0, prm.ion_T);
  ResidualInfo acc;
  for (int k = 0; k < n_modes; ++k) {
    if (!mask[k]) {
      for (int i = 0; i < nd; ++i) out[k * nd + i] = 0.0;
      continue;
    }
    transport_residual(mesh, prm.v_th, prm.delta, n_modes, masked, k, trans);
    for (int j = 0; j < nc; ++j)
      for (int p = 0; p < nl; ++p) {
        const int i = k * nd + j * nl + p;
        out[i] = 2.0 * prm.eps / prm.dt * (y[i] - alpha_old[i]) + trans[j * nl + p];
      }
    for (int j = 0; j < nc; ++j)
      for (int q = 0; q < nq; ++q) {
        std::vector<double> a(n_modes);
        for (int m = 0; m < n_modes; ++m)
          a[m] = value_at_quad(mesh, std::span<const double>(masked).subspan(m * nd, nd), j, q);
        const MomentSet mo = moments_from_coefficients(basis, a[0], a[1], a[2]);
        const MixedQuantities mix = mixed_quantities(mo, ion, prm.eps, prm.nu_ee, prm.nu_ei);
        const double E = value_at_quad(mesh, fld.efield.span(), j, q);
        double s = prm.eps * inertial_source(basis, prm.rate, a, k) + collision_source(basis, a, mix, mo, k);
        if (k >= 1) s += std::sqrt(double(k)) * E * a[k - 1] / prm.v_th;
        for (int p = 0; p < nl; ++p) out[k * nd + j * nl + p] += mesh.quad_weight(q) * s * mesh.basis_at_quad(q, p);
        if (k == 2 && prm.nu_ei != 0.0) {
          MixedQuantities only_ei = mix;
          only_ei.nu_ee = 0.0;
          acc.ion_exchange += mesh.quad_weight(q) * collision_source(basis, a, only_ei, mo, 2);
        }
        if (k == 0 && mo.T < 0.0) ++acc.negative_temperature_nodes;
      }
  }
  if (info) *info = acc;
}

}  // namespace vpfp
