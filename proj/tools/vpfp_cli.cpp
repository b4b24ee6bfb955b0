// vpfp: command-line driver for the Vlasov-Poisson-Fokker-Planck solver.
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vpfp/config_io.hpp"
#include "vpfp/errors.hpp"
#include "vpfp/simulation.hpp"

namespace fs = std::filesystem;
using namespace vpfp;

namespace {

struct Common {
  std::string preset;
  std::string config;
  std::string out;
  double dt = 0.0;
  double t_end = -1.0;
  int nh = 0;
  int nx = 0;
  std::string adaptive;
  std::string delta;
};

void add_common(CLI::App* app, Common& c) {
  auto* p = app->add_option("--preset", c.preset, "named preset");
  auto* f = app->add_option("--config", c.config, "INI configuration file");
  p->excludes(f);
  app->add_option("--out", c.out, "output directory or file");
  app->add_option("--dt", c.dt, "time step");
  app->add_option("--t-end", c.t_end, "final time");
  app->add_option("--nh", c.nh, "number of Hermite modes");
  app->add_option("--nx", c.nx, "number of cells");
  app->add_option("--adaptive", c.adaptive, "adaptive Hermite truncation")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--delta", c.delta, "Lax-Friedrichs viscosity, or 'auto'");
}

ScenarioConfig resolve(const Common& c) {
  ScenarioConfig cfg;
  if (!c.config.empty()) cfg = load_config(c.config);
  else if (!c.preset.empty()) cfg = preset(c.preset);
  else throw Error(ErrorKind::config, "one of --preset or --config is required");
  if (c.dt > 0.0) cfg.dt = c.dt;
  if (c.t_end >= 0.0) cfg.t_end = c.t_end;
  if (c.nh > 0) cfg.n_modes = c.nh;
  if (c.nx > 0) cfg.n_cells = c.nx;
  if (!c.adaptive.empty()) cfg.adaptive_enabled = c.adaptive == "on";
  if (!c.delta.empty()) apply_override(cfg, "discretization", "delta", c.delta);
  validate(cfg);
  return cfg;
}

/** Same scenario at a different eps; time parameters scale with eps for the two-species case. */
ScenarioConfig with_eps(ScenarioConfig cfg, double eps, bool dt_fixed, bool t_end_fixed) {
  if (cfg.scenario == ScenarioKind::two_species_simplified) {
    const double s = eps / cfg.eps;
    if (!dt_fixed) cfg.dt *= s;
    if (!t_end_fixed) cfg.t_end *= s;
    cfg.output_interval *= s;
  }
  cfg.eps = eps;
  validate(cfg);
  return cfg;
}

void print_summary(const RunResult& r) {
  const DiagnosticRecord& last = r.records.back();
  fmt::print("steps={} picard_total={} picard_max={}\n", r.steps, r.picard_iterations, r.max_picard_iterations);
  fmt::print("t={:.6g} mass_dev={:.3e} energy_dev={:.3e} u_l2={:.3e} T_dev_l2={:.3e} phi_dev={:.3e} active={}\n",
             last.time, last.mass_dev, last.energy_dev, last.u_l2, last.T_dev_l2, last.phi_dev,
             last.active_mode_count);
}

int cmd_run(const Common& c) {
  const ScenarioConfig cfg = resolve(c);
  RunOptions opt;
  opt.output_dir = c.out.empty() ? "runs/" + cfg.name : c.out;
  const RunResult r = run(cfg, opt);
  print_summary(r);
  fmt::print("output={}\n", opt.output_dir);
  return 0;
}

int cmd_limit(const Common& c) {
  const ScenarioConfig cfg = resolve(c);
  const InitialData init = initialize(cfg);
  const LimitState& lim = init.limit;
  fmt::print("T_bar={:.17g}\nv_th={:.17g}\nc={:.17g}\n", lim.T_bar, std::sqrt(lim.T_bar), lim.c);
  if (!c.out.empty()) {
    std::string text = "# x phi_bar n_e_bar\n";
    const DGMesh& mesh = init.mesh;
    for (int j = 0; j < mesh.n_cells(); ++j) {
      const double x = mesh.cell_center(j);
      text += fmt::format("{:.17g} {:.17g} {:.17g}\n", x, evaluate(mesh, lim.phi_bar.span(), x),
                          evaluate(mesh, lim.n_e_bar.span(), x));
    }
    write_file_atomic(c.out, text);
    fmt::print("output={}\n", c.out);
  }
  return 0;
}

int cmd_project(const Common& c) {
  const ScenarioConfig cfg = resolve(c);
  const InitialData init = initialize(cfg);
  const SimulationState& st = init.state;
  const ConservedQuantities q = conserved_quantities(init.mesh, st, cfg.beta);
  fmt::print("scenario={} n_cells={} n_modes={} order={}\n", to_string(cfg.scenario), cfg.n_cells, cfg.n_modes,
             cfg.order);
  fmt::print("v_th={:.17g}\nT_bar={:.17g}\nneutrality_factor={:.17g}\n", st.basis.v_th(), init.limit.T_bar,
             init.neutrality_factor);
  fmt::print("mass={:.17g}\nmomentum={:.17g}\nenergy={:.17g}\n", q.mass, q.momentum, q.energy);
  fmt::print("active_modes={}\n", st.electrons.active_count());
  for (int k = 0; k < st.electrons.n_modes(); ++k)
    fmt::print("mode {:3d} linf={:.6e} l2={:.6e}\n", k, linf_norm(init.mesh, st.electrons.mode(k)),
               l2_norm(st.electrons.mode(k)));
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<double>& eps_list, int jobs) {
  const ScenarioConfig base = resolve(c);
  const std::string root = c.out.empty() ? "runs/" + base.name + "_sweep" : c.out;
  std::vector<ScenarioConfig> cfgs;
  for (double e : eps_list) cfgs.push_back(with_eps(base, e, c.dt > 0.0, c.t_end >= 0.0));
  std::vector<std::string> status(cfgs.size());
  auto work = [&](std::size_t i) {
    RunOptions opt;
    opt.output_dir = (fs::path(root) / fmt::format("eps_{:g}", cfgs[i].eps)).string();
    try {
      const RunResult r = run(cfgs[i], opt);
      status[i] = fmt::format("eps={:g} ok steps={} energy_dev={:.3e} active={} dir={}", cfgs[i].eps, r.steps,
                              r.records.back().energy_dev, r.records.back().active_mode_count, opt.output_dir);
    } catch (const Error& e) {
      status[i] = fmt::format("eps={:g} error: kind={} message=\"{}\"", cfgs[i].eps, to_string(e.kind()), e.what());
    }
  };
  for (std::size_t start = 0; start < cfgs.size(); start += jobs) {
    std::vector<std::thread> pool;
    for (std::size_t i = start; i < std::min(cfgs.size(), start + jobs); ++i) pool.emplace_back(work, i);
    for (auto& t : pool) t.join();
  }
  int rc = 0;
  for (const auto& s : status) {
    fmt::print("{}\n", s);
    if (s.find("error:") != std::string::npos) rc = 1;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite-DG solver for the 1D1V Vlasov-Poisson-Fokker-Planck system"};
  app.require_subcommand(1);
  Common run_o, limit_o, project_o, sweep_o;
  std::vector<double> eps_list;
  int jobs = 1;
  auto* run_c = app.add_subcommand("run", "run a simulation");
  add_common(run_c, run_o);
  auto* limit_c = app.add_subcommand("limit", "solve the Poisson-Boltzmann limit problem");
  add_common(limit_c, limit_o);
  auto* project_c = app.add_subcommand("project", "report on the projected initial data");
  add_common(project_c, project_o);
  auto* sweep_c = app.add_subcommand("sweep", "run over a list of eps values");
  add_common(sweep_c, sweep_o);
  sweep_c->add_option("--eps", eps_list, "comma-separated eps values")->delimiter(',')->required();
  sweep_c->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: kind=config message=\"%s\"\n", e.what());
    return 2;
  }

  try {
    if (*run_c) return cmd_run(run_o);
    if (*limit_c) return cmd_limit(limit_o);
    if (*project_c) return cmd_project(project_o);
    if (*sweep_c) return cmd_sweep(sweep_o, eps_list, jobs);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: kind=%s message=\"%s\"\n", std::string(to_string(e.kind())).c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: kind=io message=\"%s\"\n", e.what());
    return 1;
  }
  return 0;
}
