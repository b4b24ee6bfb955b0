#include "vpfp/simulation.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <memory>

#include <fmt/format.h>

#include "vpfp/errors.hpp"

namespace vpfp {

namespace {

std::string now_string() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

long steps_for(double t, double dt) { return std::lround(t / dt); }

}  // namespace

RunResult run(const ScenarioConfig& cfg, const RunOptions& options) {
  namespace fs = std::filesystem;
  RunManifest manifest;
  manifest.config = cfg;
  manifest.version = version_string();
  manifest.start_time = now_string();

  const bool write = !options.output_dir.empty();
  std::unique_ptr<SeriesWriter> series;
  RunResult res;
  auto finish = [&](const std::string& status) {
    if (!write) return;
    manifest.end_time = now_string();
    manifest.status = status;
    manifest.files = res.files;
    if (!res.records.empty()) {
      const DiagnosticRecord& r = res.records.back();
      manifest.summary["final_time"] = fmt::format("{:.17g}", r.time);
      manifest.summary["final_energy_dev"] = fmt::format("{:.17g}", r.energy_dev);
      manifest.summary["final_mass_dev"] = fmt::format("{:.17g}", r.mass_dev);
      manifest.summary["T_bar_initial"] = fmt::format("{:.17g}", res.initial_limit.T_bar);
    }
    manifest.summary["steps"] = std::to_string(res.steps);
    manifest.summary["picard_iterations"] = std::to_string(res.picard_iterations);
    write_manifest((fs::path(options.output_dir) / "manifest.ini").string(), manifest);
  };

  if (write) {
    std::error_code ec;
    fs::create_directories(fs::path(options.output_dir) / "snapshots", ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + options.output_dir + ": " + ec.message());
    series = std::make_unique<SeriesWriter>((fs::path(options.output_dir) / "series.csv").string());
    res.files.push_back("series.csv");
  }

  try {
    InitialData init = initialize(cfg);
    res.mesh = init.mesh;
    const DGMesh& mesh = res.mesh;
    res.state = std::move(init.state);
    res.initial_limit = init.limit;
    res.limit = init.limit;
    SimulationState& st = res.state;

    const TimeStepperConfig tcfg = cfg.stepper();
    CrankNicolsonStepper stepper(mesh, cfg.n_modes, st.ions.density, cfg.physics(), tcfg);
    VthTracker tracker(mesh, st.ions.density, cfg.beta, st.budget);
    RecordContext ctx{cfg.beta, cfg.eps, cfg.nu_ee, cfg.nu_ei, cfg.entropy_grid, false};
    res.reference = conserved_quantities(mesh, st, cfg.beta);

    const long n_steps = steps_for(cfg.t_end, cfg.dt);
    const long every = std::max(1L, steps_for(cfg.output_interval, cfg.dt));
    std::vector<long> snap_steps;
    for (double t : cfg.snapshot_times)
      if (steps_for(t, cfg.dt) <= n_steps) snap_steps.push_back(steps_for(t, cfg.dt));

    auto entropy_of = [&](const SimulationState& s) {
      return entropy_quantities(s.basis, mesh, s.electrons, cfg.eps, cfg.nu_ee, cfg.nu_ei, s.ions.temperature,
                                cfg.entropy_grid);
    };
    auto emit = [&](DiagnosticRecord rec) {
      if (series) series->write(rec);
      if (options.on_record) options.on_record(mesh, st, rec);
      res.records.push_back(rec);
    };
    auto snapshot = [&](long step) {
      if (!write) return;
      for (long s : snap_steps)
        if (s == step) {
          const std::string name = fmt::format("snapshots/f_t{:.6g}.txt", st.time);
          write_snapshot((fs::path(options.output_dir) / name).string(),
                         snapshot_distribution(mesh, st, cfg.snapshot_nx, cfg.snapshot_vmax * st.basis.v_th(),
                                               cfg.snapshot_nv));
          res.files.push_back(name);
          break;
        }
    };

    {
      DiagnosticRecord rec = compute_record(mesh, st, res.limit, res.reference, ctx);
      if (options.entropy) {
        const EntropyQuantities q = entropy_of(st);
        rec.entropy = q.entropy;
        rec.entropy_dissipation = q.dissipation;
        rec.entropy_excluded = q.excluded_fraction;
      }
      emit(rec);
      snapshot(0);
    }

    for (long m = 1; m <= n_steps; ++m) {
      const bool record = m % every == 0 || m == n_steps;
      EntropyQuantities q0;
      if (record && options.entropy) q0 = entropy_of(st);
      const auto [v_new, rate] = tracker.update(ion_energy(st), cfg.dt);
      const StepReport rep = stepper.step(st, v_new, rate);
      adaptive_mask_update(st.electrons, mesh, tcfg);
      ++res.steps;
      res.picard_iterations += rep.picard_iterations;
      res.max_picard_iterations = std::max(res.max_picard_iterations, rep.picard_iterations);
      if (options.on_step) options.on_step(mesh, st, rep);
      if (record) {
        res.limit = tracker.limit();
        DiagnosticRecord rec = compute_record(mesh, st, res.limit, res.reference, ctx);
        rec.picard_iterations = rep.picard_iterations;
        if (options.entropy) {
          const EntropyQuantities q1 = entropy_of(st);
          rec.entropy = q1.entropy;
          rec.entropy_dissipation = q1.dissipation;
          rec.entropy_excluded = q1.excluded_fraction;
          entropy_balance(q0, q1, cfg.eps, cfg.dt, rec);
        }
        emit(rec);
      }
      snapshot(m);
    }
    res.limit = tracker.limit();
  } catch (const Error& e) {
    series.reset();
    finish("error: " + std::string(to_string(e.kind())));
    throw;
  }
  series.reset();
  finish("completed");
  return res;
}

}  // namespace vpfp
