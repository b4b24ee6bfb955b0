#pragma once

#include <span>

#include "vpfp/hermite_basis.hpp"

namespace vpfp {

/** Local moments of one species; w = n T / 2 + n u^2 / 2. */
struct MomentSet {
  double n = 0.0;
  double u = 0.0;
  double T = 0.0;
  double w = 0.0;
};

/** Mixed electron-ion drift and temperature with the parameters that define them. */
struct MixedQuantities {
  double u_ei = 0.0;
  double T_ei = 0.0;
  double eps = 1.0;
  double nu_ee = 0.0;
  double nu_ei = 0.0;
};

/** Throws nonpositive_density when a0 <= 0. T may come out negative; callers decide. */
MomentSet moments_from_coefficients(const HermiteBasis& basis, double a0, double a1, double a2);
MomentSet moments_from_coefficients(double v_th, double a0, double a1, double a2);

MomentSet maxwellian_moments(double n, double u, double T);

/**
 * u_ei = (u_e + eps u_i)/2,
 * T_ei = (T_e + eps^2 T_i + (u_e - eps u_i)^2 / 2) / (1 + eps^2).
 */
MixedQuantities mixed_quantities(const MomentSet& e, const MomentSet& i, double eps, double nu_ee = 0.0,
                                 double nu_ei = 0.0);

/**
 * Hermite coefficient k of the electron collision operator, moved to the left side:
 * (nu_ee+nu_ei) k a_k - sqrt(k) (nu_ee u + nu_ei u_ei)/v_th a_{k-1}
 *   + (nu_ee (1 - T/v_th^2) + nu_ei (1 - T_ei/v_th^2)) sqrt(k(k-1)) a_{k-2}.
 */
double collision_source(const HermiteBasis& basis, std::span<const double> alpha, const MixedQuantities& mix,
                        const MomentSet& moments, int k);
double collision_source(double v_th, std::span<const double> alpha, const MixedQuantities& mix,
                        const MomentSet& moments, int k);

/** (v_th'/v_th) (k a_k + sqrt(k(k-1)) a_{k-2}). */
double inertial_source(const HermiteBasis& basis, double vth_dot_over_vth, std::span<const double> alpha, int k);

/** Velocity sampling used by the entropy diagnostics. */
struct VelocityGrid {
  int points = 256;
  double half_width = 6.0;  // in units of v_th
};

struct EntropyQuantities {
  double entropy = 0.0;              // int int f log f
  double dissipation = 0.0;          // electron entropy dissipation
  double identity_rhs = 0.0;         // right side of the electron entropy identity
  double excluded_fraction = 0.0;    // share of grid points with f <= 0
};

/**
 * Samples f and df/dv on (x quadrature nodes) x (uniform v grid) and integrates
 *   f log f,
 *   nu_ee T (f' + (v-u) f/T)^2 / f + nu_ei T_ei (f' + (v-u_ei) f/T_ei)^2 / f,
 *   nu_ei n / T_ei [eps^2 (T - T_i) - (1 - eps^2) u^2 / 4] / (1 + eps^2).
 * Points with f <= 0 are skipped and counted. Ions are at rest with temperature ion_T.
 */
EntropyQuantities entropy_quantities(const HermiteBasis& basis, const DGMesh& mesh, const HermiteCoefficients& coeffs,
                                     double eps, double nu_ee, double nu_ei, double ion_T,
                                     const VelocityGrid& grid = {});

double entropy_dissipation_diagnostic(const HermiteBasis& basis, const DGMesh& mesh, const HermiteCoefficients& coeffs,
                                      double eps, double nu_ee, double nu_ei, double ion_T,
                                      const VelocityGrid& grid = {}, double* excluded_fraction = nullptr);

}  // namespace vpfp
