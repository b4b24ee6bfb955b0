#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "vpfp/collisions.hpp"
#include "vpfp/integrator.hpp"
#include "vpfp/limit_model.hpp"

namespace vpfp {

struct ConservedQuantities {
  double mass = 0.0;      // int alpha_0
  double momentum = 0.0;  // int v_th alpha_1
  double energy = 0.0;    // kinetic + discrete field energy + ion energy
};

ConservedQuantities conserved_quantities(const DGMesh& mesh, const SimulationState& state, double beta);

struct DiagnosticRecord {
  double time = 0.0;
  double mass_dev = 0.0;      // relative
  double momentum_dev = 0.0;  // absolute
  double energy_dev = 0.0;    // relative
  double potential_energy = 0.0;
  double Te_mean = 0.0;
  double Ti = 0.0;
  std::array<double, 6> l2_alpha{};  // k = 1..6, zero above N_H - 1
  double u_l2 = 0.0;
  double T_dev_l2 = 0.0;
  double phi_dev = 0.0;
  double entropy = 0.0;
  double entropy_dissipation = 0.0;
  double entropy_excluded = 0.0;
  double entropy_rate_lhs = 0.0;  // eps dH/dt + dissipation over the last step
  double entropy_rate_rhs = 0.0;
  int active_mode_count = 0;
  double v_th = 0.0;
  int picard_iterations = 0;
};

struct RecordContext {
  double beta = 1.0;
  double eps = 1.0;
  double nu_ee = 0.0;
  double nu_ei = 0.0;
  VelocityGrid grid;
  bool entropy = true;
};

DiagnosticRecord compute_record(const DGMesh& mesh, const SimulationState& state, const LimitState& limit,
                                const ConservedQuantities& reference, const RecordContext& ctx);

/**
 * Discrete entropy balance over one step from the two end states:
 * lhs = eps (H1 - H0)/dt + (D0 + D1)/2, rhs = (S0 + S1)/2.
 */
void entropy_balance(const EntropyQuantities& q0, const EntropyQuantities& q1, double eps, double dt,
                     DiagnosticRecord& rec);

struct Snapshot {
  double time = 0.0;
  double v_max = 0.0;
  std::vector<double> x, v;
  std::vector<double> f;  // row-major, f[i * v.size() + j] = f(x_i, v_j)
};

/** Cell-centred x grid of nx points and nv points spanning [-v_max, v_max]. */
Snapshot snapshot_distribution(const DGMesh& mesh, const SimulationState& state, int nx, double v_max, int nv);

void write_snapshot(const std::string& path, const Snapshot& snap);

std::string csv_header();
std::string csv_row(const DiagnosticRecord& rec);

/** Appends records to a CSV file, flushing after every row. */
class SeriesWriter {
 public:
  explicit SeriesWriter(const std::string& path);
  ~SeriesWriter();
  SeriesWriter(const SeriesWriter&) = delete;
  SeriesWriter& operator=(const SeriesWriter&) = delete;
  void write(const DiagnosticRecord& rec);

 private:
  std::FILE* file_ = nullptr;
  std::string path_;
};

}  // namespace vpfp
