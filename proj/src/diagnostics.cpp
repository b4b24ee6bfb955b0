#include "vpfp/diagnostics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "vpfp/errors.hpp"
#include "vpfp/scenarios.hpp"

namespace vpfp {

ConservedQuantities conserved_quantities(const DGMesh& mesh, const SimulationState& state, double beta) {
  ConservedQuantities q;
  q.mass = integral(mesh, state.electrons.mode(0));
  q.momentum = total_momentum(mesh, state.basis, state.electrons);
  q.energy = kinetic_energy(mesh, state.basis, state.electrons) + discrete_field_energy(mesh, state.field, beta) +
             ion_energy(state);
  return q;
}

DiagnosticRecord compute_record(const DGMesh& mesh, const SimulationState& state, const LimitState& limit,
                                const ConservedQuantities& reference, const RecordContext& ctx) {
  DiagnosticRecord r;
  const ConservedQuantities q = conserved_quantities(mesh, state, ctx.beta);
  r.time = state.time;
  r.mass_dev = std::abs(q.mass - reference.mass) / std::abs(reference.mass);
  r.momentum_dev = std::abs(q.momentum - reference.momentum);
  r.energy_dev = std::abs(q.energy - reference.energy) / std::abs(reference.energy);
  r.potential_energy = discrete_field_energy(mesh, state.field, ctx.beta);
  r.Ti = state.ions.dynamic_temperature ? state.ions.temperature : 0.0;
  const HermiteCoefficients& c = state.electrons;
  for (int k = 1; k <= 6; ++k) r.l2_alpha[k - 1] = k < c.n_modes() ? l2_norm(c.mode(k)) : 0.0;

  const double v = state.basis.v_th(), v2 = v * v;
  double u2 = 0.0, dT2 = 0.0, Tint = 0.0;
  for (int j = 0; j < mesh.n_cells(); ++j)
    for (int q = 0; q < mesh.n_quad(); ++q) {
      const double a0 = value_at_quad(mesh, c.mode(0), j, q);
      const double a1 = value_at_quad(mesh, c.mode(1), j, q);
      const double a2 = value_at_quad(mesh, c.mode(2), j, q);
      const double w = mesh.quad_weight(q);
      if (!(a0 > 0.0)) continue;
      const MomentSet m = moments_from_coefficients(v, a0, a1, a2);
      u2 += w * m.u * m.u;
      dT2 += w * (m.T - v2) * (m.T - v2);
      Tint += w * m.T;
    }
  r.u_l2 = std::sqrt(u2);
  r.T_dev_l2 = std::sqrt(dT2);
  r.Te_mean = Tint / mesh.length();
  if (!limit.phi_bar.coeffs.empty()) {
    double s = 0.0;
    for (std::size_t i = 0; i < limit.phi_bar.coeffs.size(); ++i) {
      const double d = state.field.phi.coeffs[i] - limit.phi_bar.coeffs[i];
      s += d * d;
    }
    r.phi_dev = std::sqrt(s);
  }
  if (ctx.entropy) {
    const EntropyQuantities e =
        entropy_quantities(state.basis, mesh, c, ctx.eps, ctx.nu_ee, ctx.nu_ei, state.ions.temperature, ctx.grid);
    r.entropy = e.entropy;
    r.entropy_dissipation = e.dissipation;
    r.entropy_excluded = e.excluded_fraction;
  }
  r.active_mode_count = c.active_count();
  r.v_th = v;
  return r;
}

void entropy_balance(const EntropyQuantities& q0, const EntropyQuantities& q1, double eps, double dt,
                     DiagnosticRecord& rec) {
  rec.entropy_rate_lhs = eps * (q1.entropy - q0.entropy) / dt + 0.5 * (q0.dissipation + q1.dissipation);
  rec.entropy_rate_rhs = 0.5 * (q0.identity_rhs + q1.identity_rhs);
}

Snapshot snapshot_distribution(const DGMesh& mesh, const SimulationState& state, int nx, double v_max, int nv) {
  require(nx > 0 && nv > 0 && v_max > 0.0, "snapshot resolutions and window must be positive");
  Snapshot s;
  s.time = state.time;
  s.v_max = v_max;
  s.x.resize(nx);
  s.v.resize(nv);
  for (int i = 0; i < nx; ++i) s.x[i] = (i + 0.5) * mesh.length() / nx;
  for (int j = 0; j < nv; ++j) s.v[j] = nv == 1 ? 0.0 : -v_max + 2.0 * v_max * j / (nv - 1);
  s.f.resize(static_cast<std::size_t>(nx) * nv);
  const HermiteCoefficients& c = state.electrons;
  std::vector<double> ak(c.n_modes()), psi(c.n_modes());
  for (int i = 0; i < nx; ++i) {
    double xi;
    const int cell = mesh.locate(s.x[i], xi);
    for (int k = 0; k < c.n_modes(); ++k) ak[k] = c.active(k) ? evaluate_cell(mesh, c.mode(k), cell, xi) : 0.0;
    for (int j = 0; j < nv; ++j) {
      state.basis.psi_all(s.v[j], psi);
      double f = 0.0;
      for (int k = 0; k < c.n_modes(); ++k) f += ak[k] * psi[k];
      s.f[static_cast<std::size_t>(i) * nv + j] = f;
    }
  }
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error(ErrorKind::io, "cannot open " + path);
  fmt::print(f, "# time {:.17g}\n# v_max {:.17g}\n# shape {} {}\n", snap.time, snap.v_max, snap.x.size(),
             snap.v.size());
  fmt::print(f, "# layout: first line x, second line v, then one row per x of f(x_i, v_j)\n");
  auto line = [&](const std::vector<double>& a, std::size_t off, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) fmt::print(f, "{}{:.17g}", i ? " " : "", a[off + i]);
    fmt::print(f, "\n");
  };
  line(snap.x, 0, snap.x.size());
  line(snap.v, 0, snap.v.size());
  for (std::size_t i = 0; i < snap.x.size(); ++i) line(snap.f, i * snap.v.size(), snap.v.size());
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw Error(ErrorKind::io, "failed writing " + path);
}

std::string csv_header() {
  return "time,mass_dev,momentum_dev,energy_dev,potential_energy,Te_mean,Ti,l2_alpha_1,l2_alpha_2,l2_alpha_3,"
         "l2_alpha_4,l2_alpha_5,l2_alpha_6,u_l2,T_dev_l2,phi_dev,entropy,entropy_dissipation,entropy_excluded,"
         "entropy_rate_lhs,entropy_rate_rhs,active_mode_count,v_th,picard_iterations";
}

std::string csv_row(const DiagnosticRecord& r) {
  std::string s = fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", r.time, r.mass_dev,
                              r.momentum_dev, r.energy_dev, r.potential_energy, r.Te_mean, r.Ti);
  for (double a : r.l2_alpha) s += fmt::format(",{:.17g}", a);
  s += fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{}", r.u_l2,
                   r.T_dev_l2, r.phi_dev, r.entropy, r.entropy_dissipation, r.entropy_excluded, r.entropy_rate_lhs,
                   r.entropy_rate_rhs, r.active_mode_count, r.v_th, r.picard_iterations);
  return s;
}

SeriesWriter::SeriesWriter(const std::string& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "w");
  if (!file_) throw Error(ErrorKind::io, "cannot open " + path);
  fmt::print(file_, "{}\n", csv_header());
  std::fflush(file_);
}

SeriesWriter::~SeriesWriter() {
  if (file_) std::fclose(file_);
}

void SeriesWriter::write(const DiagnosticRecord& rec) {
  fmt::print(file_, "{}\n", csv_row(rec));
  if (std::fflush(file_) != 0) throw Error(ErrorKind::io, "failed writing " + path_);
}

}  // namespace vpfp
