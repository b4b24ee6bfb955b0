#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vpfp/dg_space.hpp"

namespace vpfp {

/** Probabilists' Hermite polynomial normalized against M: sqrt(k+1) J_{k+1} = x J_k - sqrt(k) J_{k-1}. */
double eval_probabilist_hermite(int k, double x);

/**
 * Scaled Hermite functions psi_k(v) = J_k(v/v_th) M(v/v_th) / v_th, evaluated
 * with the Gaussian folded into the recurrence.
 */
class HermiteBasis {
 public:
  HermiteBasis(int n_modes, double v_th);

  int n_modes() const { return n_modes_; }
  double v_th() const { return v_th_; }

  double psi(int k, double v) const;
  /** psi_0 .. psi_{count-1} at v. */
  void psi_all(double v, std::span<double> out) const;

 private:
  int n_modes_;
  double v_th_;
};

double eval_basis_function(const HermiteBasis& basis, int k, double v);

/**
 * Hermite coefficients alpha_k(x), k < n_modes, each a DG function, stored
 * contiguously: data[(k * n_cells + j) * n_local + p].
 */
class HermiteCoefficients {
 public:
  HermiteCoefficients() = default;
  HermiteCoefficients(int n_modes, const DGMesh& mesh);

  int n_modes() const { return n_modes_; }
  int n_cells() const { return n_cells_; }
  int n_local() const { return n_local_; }
  int mode_size() const { return n_cells_ * n_local_; }

  std::span<double> mode(int k) { return {data_.data() + static_cast<std::size_t>(k) * mode_size(), static_cast<std::size_t>(mode_size())}; }
  std::span<const double> mode(int k) const { return {data_.data() + static_cast<std::size_t>(k) * mode_size(), static_cast<std::size_t>(mode_size())}; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool active(int k) const { return mask_[k] != 0; }
  void set_active(int k, bool on) { mask_[k] = on ? 1 : 0; }
  const std::vector<char>& mask() const { return mask_; }
  int active_count() const;
  /** Zero the coefficients of inactive modes. */
  void zero_inactive();

 private:
  int n_modes_ = 0, n_cells_ = 0, n_local_ = 0;
  std::vector<double> data_;
  std::vector<char> mask_;
};

using PhaseSpaceFunction = std::function<double(double x, double v)>;

/** Number of Gauss-Hermite nodes used for projections: max(2 N_H, 64). */
int projection_nodes(int n_modes);

/** Pointwise velocity projection alpha_k(x) = int f0(x, v) J_k(v/v_th) dv for all k. */
std::vector<double> hermite_coefficients_at(const HermiteBasis& basis, const PhaseSpaceFunction& f0, double x);

HermiteCoefficients project_initial_data(const HermiteBasis& basis, const PhaseSpaceFunction& f0, const DGMesh& mesh);

double reconstruct_distribution(const HermiteBasis& basis, const DGMesh& mesh, const HermiteCoefficients& coeffs,
                                double x, double v);

}  // namespace vpfp
