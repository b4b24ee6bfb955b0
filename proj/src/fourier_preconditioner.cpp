#include "vpfp/fourier_preconditioner.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <mutex>
#include <numbers>

#include "vpfp/errors.hpp"

namespace vpfp {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierPreconditioner::FourierPreconditioner(const DGMesh& mesh, int n_modes)
    : mesh_(mesh), n_modes_(n_modes), n_freq_(mesh.n_cells() / 2 + 1), mask_(n_modes, 0) {
  const int nc = mesh.n_cells(), nl = mesh.n_local();
  const std::size_t nreal = static_cast<std::size_t>(n_modes) * nc * nl;
  const std::size_t nspec = static_cast<std::size_t>(n_modes) * n_freq_ * nl;
  std::lock_guard<std::mutex> lock(planner_mutex());
  real_ = fftw_alloc_real(nreal);
  spec_ = reinterpret_cast<cplx*>(fftw_alloc_complex(nspec));
  fftw_iodim dim_f{nc, nl, nl};
  fftw_iodim many_f[2] = {{n_modes, nc * nl, n_freq_ * nl}, {nl, 1, 1}};
  fwd_ = fftw_plan_guru_dft_r2c(1, &dim_f, 2, many_f, real_, reinterpret_cast<fftw_complex*>(spec_), FFTW_ESTIMATE);
  fftw_iodim dim_b{nc, nl, nl};
  fftw_iodim many_b[2] = {{n_modes, n_freq_ * nl, nc * nl}, {nl, 1, 1}};
  bwd_ = fftw_plan_guru_dft_c2r(1, &dim_b, 2, many_b, reinterpret_cast<fftw_complex*>(spec_), real_, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw Error(ErrorKind::precondition, "FFTW planning failed");
}

FourierPreconditioner::~FourierPreconditioner() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

// Symbols of the transport flux-difference operator acting on g (G) and of the
// jump penalty acting on alpha_k with unit viscosity (Lam), at cell wavenumber theta.
void FourierPreconditioner::symbols(double theta, std::vector<cplx>& G, std::vector<cplx>& Lam) const {
  const int nl = mesh_.n_local();
  const cplx em = std::polar(1.0, -theta), ep = std::polar(1.0, theta);
  G.assign(nl * nl, 0.0);
  Lam.assign(nl * nl, 0.0);
  for (int p = 0; p < nl; ++p)
    for (int q = 0; q < nl; ++q) {
      const double Rp = mesh_.right_trace(p), Lp = mesh_.left_trace(p);
      const double Rq = mesh_.right_trace(q), Lq = mesh_.left_trace(q);
      G[p * nl + q] = -0.5 * Lp * Rq * em + (-mesh_.stiffness(p, q) + 0.5 * Rp * Rq - 0.5 * Lp * Lq) + 0.5 * Rp * Lq * ep;
      Lam[p * nl + q] = -0.5 * Lp * Rq * em + (0.5 * Rp * Rq + 0.5 * Lp * Lq) - 0.5 * Rp * Lq * ep;
    }
}

void FourierPreconditioner::factor(const Params& prm, const std::vector<char>& mask) {
  prm_ = prm;
  mask_ = mask;
  active_.clear();
  for (int k = 0; k < n_modes_; ++k)
    if (mask[k]) active_.push_back(k);
  const int na = static_cast<int>(active_.size()), nl = mesh_.n_local(), nc = mesh_.n_cells();
  const std::size_t bs = static_cast<std::size_t>(nl) * nl;
  G_.assign(n_freq_ * bs, 0.0);
  W_.assign(static_cast<std::size_t>(n_freq_) * na * bs, 0.0);
  M_.assign(static_cast<std::size_t>(n_freq_) * na * bs, 0.0);
  up_.assign(na, 0.0);
  linked_.assign(na, 0);
  for (int i = 1; i < na; ++i) linked_[i] = active_[i - 1] == active_[i] - 1;
  for (int i = 0; i + 1 < na; ++i)
    if (linked_[i + 1]) up_[i] = prm.v_th * std::sqrt(double(active_[i] + 1));

  using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  std::vector<cplx> G, Lam;
  for (int m = 0; m < n_freq_; ++m) {
    symbols(2.0 * std::numbers::pi * m / nc, G, Lam);
    std::copy(G.begin(), G.end(), G_.begin() + m * bs);
    Eigen::Map<const Mat> Gm(G.data(), nl, nl), Lm(Lam.data(), nl, nl);
    Mat Wprev;
    for (int i = 0; i < na; ++i) {
      const int k = active_[i];
      Mat D = Mat::Identity(nl, nl) * (prm.diagonal + prm.nu * k);
      if (k > 0) D += prm.delta * Lm;
      if (linked_[i]) {
        const double c = prm.v_th * std::sqrt(double(k));
        Mat Mi = c * Gm * Wprev;
        D -= c * Mi * Gm;
        Eigen::Map<Mat>(&M_[(static_cast<std::size_t>(m) * na + i) * bs], nl, nl) = Mi;
      }
      Mat W = D.inverse();
      if (!W.allFinite()) throw Error(ErrorKind::singular_system, "preconditioner block is singular");
      Eigen::Map<Mat>(&W_[(static_cast<std::size_t>(m) * na + i) * bs], nl, nl) = W;
      Wprev = W;
    }
  }
  factored_ = true;
}

void FourierPreconditioner::apply(std::span<const double> r, std::span<double> x) {
  require(factored_, "FourierPreconditioner::apply before factor");
  const int nc = mesh_.n_cells(), nl = mesh_.n_local(), na = static_cast<int>(active_.size());
  const std::size_t nd = static_cast<std::size_t>(nc) * nl, bs = static_cast<std::size_t>(nl) * nl;
  for (int k = 0; k < n_modes_; ++k)
    for (std::size_t i = 0; i < nd; ++i) real_[k * nd + i] = mask_[k] ? r[k * nd + i] : 0.0;
  fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_), real_, reinterpret_cast<fftw_complex*>(spec_));

  auto at = [&](int k, int m) { return spec_ + (static_cast<std::size_t>(k) * n_freq_ + m) * nl; };
#pragma omp parallel for schedule(static)
  for (int m = 0; m < n_freq_; ++m) {
    cplx tmp[8];
    const cplx* G = &G_[m * bs];
    for (int i = 1; i < na; ++i) {
      if (!linked_[i]) continue;
      const cplx* Mi = &M_[(static_cast<std::size_t>(m) * na + i) * bs];
      cplx* ri = at(active_[i], m);
      const cplx* rp = at(active_[i - 1], m);
      for (int p = 0; p < nl; ++p) {
        cplx s = 0.0;
        for (int q = 0; q < nl; ++q) s += Mi[p * nl + q] * rp[q];
        ri[p] -= s;
      }
    }
    for (int i = na - 1; i >= 0; --i) {
      cplx* ri = at(active_[i], m);
      if (i + 1 < na && linked_[i + 1]) {
        const cplx* xn = at(active_[i + 1], m);
        for (int p = 0; p < nl; ++p) {
          cplx s = 0.0;
          for (int q = 0; q < nl; ++q) s += G[p * nl + q] * xn[q];
          ri[p] -= up_[i] * s;
        }
      }
      const cplx* W = &W_[(static_cast<std::size_t>(m) * na + i) * bs];
      for (int p = 0; p < nl; ++p) {
        cplx s = 0.0;
        for (int q = 0; q < nl; ++q) s += W[p * nl + q] * ri[q];
        tmp[p] = s;
      }
      for (int p = 0; p < nl; ++p) ri[p] = tmp[p];
    }
  }

  fftw_execute_dft_c2r(static_cast<fftw_plan>(bwd_), reinterpret_cast<fftw_complex*>(spec_), real_);
  const double scale = 1.0 / nc;
  for (int k = 0; k < n_modes_; ++k)
    for (std::size_t i = 0; i < nd; ++i) x[k * nd + i] = mask_[k] ? real_[k * nd + i] * scale : 0.0;
}

void FourierPreconditioner::multiply(std::span<const double> x, std::span<double> y) const {
  const int nd = mesh_.n_dofs();
  std::vector<double> masked(x.begin(), x.end()), tr(nd);
  for (int k = 0; k < n_modes_; ++k)
    if (!mask_[k])
      for (int i = 0; i < nd; ++i) masked[k * nd + i] = 0.0;
  for (int k = 0; k < n_modes_; ++k) {
    if (!mask_[k]) {
      for (int i = 0; i < nd; ++i) y[k * nd + i] = 0.0;
      continue;
    }
    transport_residual(mesh_, prm_.v_th, prm_.delta, n_modes_, masked, k, tr);
    for (int i = 0; i < nd; ++i) y[k * nd + i] = (prm_.diagonal + prm_.nu * k) * masked[k * nd + i] + tr[i];
  }
}

}  // namespace vpfp
