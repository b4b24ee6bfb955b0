#pragma once

#include <span>
#include <vector>

#include "vpfp/dg_space.hpp"
#include "vpfp/ldg_poisson.hpp"

namespace vpfp {

/** Frozen parameters of one Crank-Nicolson residual evaluation. */
struct CnParams {
  double dt = 0.0;
  double eps = 1.0;
  double v_th = 1.0;   // midpoint scaling velocity
  double rate = 0.0;   // v_th'/v_th at the midpoint
  double delta = 0.0;  // Lax-Friedrichs viscosity for k >= 1
  double nu_ee = 0.0;
  double nu_ei = 0.0;
  double ion_T = 0.0;  // midpoint ion temperature (ions at rest)
};

struct ResidualInfo {
  double ion_exchange = 0.0;  // int Q_2^{ei} dx at the midpoint
  int negative_temperature_nodes = 0;
};

/**
 * Residual of the midpoint form of the Crank-Nicolson step for y = alpha^{m+1/2}:
 *   2 eps/dt (y - alpha^m) + transport(y) + int [eps I_k + sqrt(k) E y_{k-1}/v_th + Q_k] phi_p,
 * with E from the LDG Poisson solve of n_i - y_0 and all moments taken from y.
 * Rows of inactive modes are set to zero. Parallel over modes and cells.
 */
class CnResidual {
 public:
  CnResidual(const DGMesh& mesh, int n_modes, const DGFunction& n_i, double beta);

  const DGMesh& mesh() const { return mesh_; }
  const LdgPoisson& poisson() const { return poisson_; }
  const DGFunction& ion_density() const { return n_i_; }
  int n_modes() const { return n_modes_; }

  /** Field of the electron density coefficients y0 (one DG block). */
  FieldSolution field(std::span<const double> y0) const;

  void evaluate(std::span<const double> y, std::span<const double> alpha_old, const std::vector<char>& mask,
                const CnParams& prm, std::span<double> out, ResidualInfo* info = nullptr);

 private:
  DGMesh mesh_;
  int n_modes_;
  DGFunction n_i_;
  double ni_norm_;
  LdgPoisson poisson_;
  std::vector<double> nodes_, enodes_, c1_, c2_, xq_;
};

/** Reference implementation of CnResidual::evaluate built from the pointwise module functions. */
void serial_cn_residual(const DGMesh& mesh, const LdgPoisson& poisson, const DGFunction& n_i, int n_modes,
                        std::span<const double> y, std::span<const double> alpha_old, const std::vector<char>& mask,
                        const CnParams& prm, std::span<double> out, ResidualInfo* info = nullptr);

}  // namespace vpfp
