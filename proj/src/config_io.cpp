#include "vpfp/config_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "vpfp/errors.hpp"

namespace vpfp {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& field, const std::string& value, const std::string& what) {
  throw Error(ErrorKind::config, "field '" + field + "' value '" + value + "': " + what);
}

double to_double(const std::string& field, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad(field, v, "expected a real number");
  return out;
}

int to_int(const std::string& field, const std::string& raw) {
  const std::string v = trim(raw);
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad(field, v, "expected an integer");
  return out;
}

bool to_bool(const std::string& field, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  bad(field, v, "expected on/off");
}

std::vector<double> to_list(const std::string& field, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(to_double(field, item));
  return out;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s;
}

}  // namespace

void apply_override(ScenarioConfig& c, const std::string& section, const std::string& key, const std::string& value) {
  const std::string f = section + "." + key;
  const std::string v = trim(value);
  if (section == "scenario") {
    if (key == "name") c.name = v;
    else if (key == "kind") c.scenario = scenario_from_string(v);
    else if (key == "eps") c.eps = to_double(f, v);
    else if (key == "nu_ee") c.nu_ee = to_double(f, v);
    else if (key == "nu_ei") c.nu_ei = to_double(f, v);
    else if (key == "length") c.length = to_double(f, v);
    else if (key == "ion_amplitude") c.ion_amplitude = to_double(f, v);
    else if (key == "electron_amplitude") c.electron_amplitude = to_double(f, v);
    else if (key == "drift_amplitude") c.drift_amplitude = to_double(f, v);
    else if (key == "ion_temperature0") c.ion_temperature0 = to_double(f, v);
    else bad(f, v, "unknown key");
  } else if (section == "discretization") {
    if (key == "n_cells") c.n_cells = to_int(f, v);
    else if (key == "n_modes") c.n_modes = to_int(f, v);
    else if (key == "order") c.order = to_int(f, v);
    else if (key == "beta") c.beta = to_double(f, v);
    else if (key == "delta") {
      if (v == "auto") c.delta_override.reset();
      else c.delta_override = to_double(f, v);
    } else bad(f, v, "unknown key");
  } else if (section == "time") {
    if (key == "dt") c.dt = to_double(f, v);
    else if (key == "t_end") c.t_end = to_double(f, v);
    else if (key == "picard_tol") c.picard_tol = to_double(f, v);
    else if (key == "picard_max_iters") c.picard_max_iters = to_int(f, v);
    else bad(f, v, "unknown key");
  } else if (section == "adaptive") {
    if (key == "enabled") c.adaptive_enabled = to_bool(f, v);
    else if (key == "threshold") c.adaptive_threshold = to_double(f, v);
    else if (key == "min_mode") c.adaptive_min_mode = to_int(f, v);
    else bad(f, v, "unknown key");
  } else if (section == "output") {
    if (key == "interval") c.output_interval = to_double(f, v);
    else if (key == "snapshot_times") c.snapshot_times = to_list(f, v);
    else if (key == "snapshot_nx") c.snapshot_nx = to_int(f, v);
    else if (key == "snapshot_nv") c.snapshot_nv = to_int(f, v);
    else if (key == "snapshot_vmax") c.snapshot_vmax = to_double(f, v);
    else if (key == "entropy_points") c.entropy_grid.points = to_int(f, v);
    else if (key == "entropy_half_width") c.entropy_grid.half_width = to_double(f, v);
    else bad(f, v, "unknown key");
  } else {
    throw Error(ErrorKind::config, "unknown section '" + section + "'");
  }
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::config, fmt::format("{} line {}: {}", source, e.line(), e.message()));
  }
  ScenarioConfig cfg;
  if (auto sc = tree.get_child_optional("scenario"))
    if (auto p = sc->get_optional<std::string>("preset")) cfg = preset(trim(*p));
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorKind::config, source + ": key '" + section + "' outside of a section");
    for (const auto& [key, node] : body) {
      if (section == "scenario" && key == "preset") continue;
      try {
        apply_override(cfg, section, key, node.data());
      } catch (const Error& e) {
        throw Error(ErrorKind::config, source + ": " + e.what());
      }
    }
  }
  try {
    validate(cfg);
  } catch (const Error& e) {
    throw Error(ErrorKind::config, source + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string s;
  s += "[scenario]\n";
  s += "name = " + c.name + "\n";
  s += "kind = " + to_string(c.scenario) + "\n";
  s += "eps = " + num(c.eps) + "\n";
  s += "nu_ee = " + num(c.nu_ee) + "\n";
  s += "nu_ei = " + num(c.nu_ei) + "\n";
  s += "length = " + num(c.length) + "\n";
  s += "ion_amplitude = " + num(c.ion_amplitude) + "\n";
  s += "electron_amplitude = " + num(c.electron_amplitude) + "\n";
  s += "drift_amplitude = " + num(c.drift_amplitude) + "\n";
  s += "ion_temperature0 = " + num(c.ion_temperature0) + "\n";
  s += "\n[discretization]\n";
  s += "n_cells = " + std::to_string(c.n_cells) + "\n";
  s += "n_modes = " + std::to_string(c.n_modes) + "\n";
  s += "order = " + std::to_string(c.order) + "\n";
  s += "beta = " + num(c.beta) + "\n";
  s += "delta = " + (c.delta_override ? num(*c.delta_override) : std::string("auto")) + "\n";
  s += "\n[time]\n";
  s += "dt = " + num(c.dt) + "\n";
  s += "t_end = " + num(c.t_end) + "\n";
  s += "picard_tol = " + num(c.picard_tol) + "\n";
  s += "picard_max_iters = " + std::to_string(c.picard_max_iters) + "\n";
  s += "\n[adaptive]\n";
  s += std::string("enabled = ") + (c.adaptive_enabled ? "on" : "off") + "\n";
  s += "threshold = " + num(c.adaptive_threshold) + "\n";
  s += "min_mode = " + std::to_string(c.adaptive_min_mode) + "\n";
  s += "\n[output]\n";
  s += "interval = " + num(c.output_interval) + "\n";
  s += "snapshot_times = " + list(c.snapshot_times) + "\n";
  s += "snapshot_nx = " + std::to_string(c.snapshot_nx) + "\n";
  s += "snapshot_nv = " + std::to_string(c.snapshot_nv) + "\n";
  s += "snapshot_vmax = " + num(c.snapshot_vmax) + "\n";
  s += "entropy_points = " + std::to_string(c.entropy_grid.points) + "\n";
  s += "entropy_half_width = " + num(c.entropy_grid.half_width) + "\n";
  return s;
}

std::string version_string() { return "vpfp 1.0.0"; }

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename " + tmp + ": " + ec.message());
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::string s = "[run]\n";
  s += "version = " + m.version + "\n";
  s += "status = " + m.status + "\n";
  s += "start = " + m.start_time + "\n";
  s += "end = " + m.end_time + "\n";
  std::string files;
  for (std::size_t i = 0; i < m.files.size(); ++i) files += (i ? ", " : "") + m.files[i];
  s += "files = " + files + "\n";
  if (!m.summary.empty()) {
    s += "\n[summary]\n";
    for (const auto& [k, v] : m.summary) s += k + " = " + v + "\n";
  }
  s += "\n" + serialize_config(m.config);
  write_file_atomic(path, s);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read manifest " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::config, fmt::format("{} line {}: {}", path, e.line(), e.message()));
  }
  RunManifest m;
  m.version = tree.get<std::string>("run.version", "");
  m.status = tree.get<std::string>("run.status", "");
  m.start_time = tree.get<std::string>("run.start", "");
  m.end_time = tree.get<std::string>("run.end", "");
  std::stringstream fl(tree.get<std::string>("run.files", ""));
  std::string item;
  while (std::getline(fl, item, ','))
    if (!trim(item).empty()) m.files.push_back(trim(item));
  if (auto sum = tree.get_child_optional("summary"))
    for (const auto& [k, v] : *sum) m.summary[k] = v.data();
  tree.erase("run");
  tree.erase("summary");
  std::ostringstream cfg;
  pt::write_ini(cfg, tree);
  m.config = parse_config(cfg.str(), path);
  return m;
}

}  // namespace vpfp
