#pragma once

#include <complex>
#include <span>
#include <vector>

#include "vpfp/dg_space.hpp"

namespace vpfp {

/**
 * Exact inverse of the translation-invariant part of the Crank-Nicolson operator,
 *   P = (2 eps/dt + nu k) I + transport(v_ref, delta_ref),
 * restricted to the active modes. P is block circulant over cells, so it is
 * diagonalized by a real FFT over the cell index; each wavenumber leaves a
 * block-tridiagonal system in the Hermite index solved by block Thomas.
 */
class FourierPreconditioner {
 public:
  struct Params {
    double diagonal = 0.0;  // 2 eps / dt
    double nu = 0.0;        // nu_ee + nu_ei
    double v_th = 1.0;
    double delta = 0.0;
  };

  FourierPreconditioner(const DGMesh& mesh, int n_modes);
  ~FourierPreconditioner();
  FourierPreconditioner(const FourierPreconditioner&) = delete;
  FourierPreconditioner& operator=(const FourierPreconditioner&) = delete;

  void factor(const Params& prm, const std::vector<char>& mask);
  const Params& params() const { return prm_; }
  const std::vector<char>& mask() const { return mask_; }
  bool factored() const { return factored_; }

  /** x = P^{-1} r on active modes; inactive rows of x are zero. x may alias r. */
  void apply(std::span<const double> r, std::span<double> x);

  /** y = P x in real space (reference application, used for testing). */
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  using cplx = std::complex<double>;
  void symbols(double theta, std::vector<cplx>& G, std::vector<cplx>& Lam) const;

  DGMesh mesh_;
  int n_modes_;
  int n_freq_;
  Params prm_;
  std::vector<char> mask_;
  std::vector<int> active_;
  bool factored_ = false;
  // per frequency: G, and per active index W_i = D'_i^{-1}, M_i = Lo_i W_{i-1}, coupling scalars
  std::vector<cplx> G_, W_, M_;
  std::vector<double> up_;
  std::vector<char> linked_;
  double* real_ = nullptr;
  cplx* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace vpfp
