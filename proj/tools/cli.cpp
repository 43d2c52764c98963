#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "emw/analysis.hpp"
#include "emw/case_io.hpp"
#include "emw/error.hpp"
#include "emw/graph_path.hpp"
#include "emw/inertia.hpp"
#include "emw/io.hpp"
#include "emw/powerflow.hpp"
#include "emw/solver.hpp"
#include "svg_plot.hpp"

namespace emw::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::string case_path, sidecar, scenario, out;
  std::optional<int> src, dst;
  std::string model = "nonhom";
  std::string boundary = "characteristic";
  std::string far_end = "fixed_angle";
  double dxi = 0.02;
  double courant = 0.9;
  double t_end = 5.0;
  std::size_t stride = 1;
  double record_dt = 1e-3;
  std::size_t csv_every = 2;
  double threshold = 0.05;
  double tol = 1e-6;
  int max_rounds = 100;
  bool serial = false;
  std::string param;
  std::vector<double> values;
  std::string line;
  int jobs = 1;
  std::string wavefield, compare, kind, title;
  std::optional<double> at;
};

// Config keys mirror the long flag names.
void apply_config(const json& j, Options& o) {
  if (!j.is_object()) throw SchemaError("config", "expected a JSON object");
  static const char* meta[] = {"tool", "version", "command", "outputs"};
  for (const auto& [key, val] : j.items()) {
    try {
      if (key == "case") o.case_path = val.get<std::string>();
      else if (key == "sidecar") o.sidecar = val.get<std::string>();
      else if (key == "scenario") o.scenario = val.get<std::string>();
      else if (key == "out") o.out = val.get<std::string>();
      else if (key == "src") o.src = val.is_null() ? std::nullopt : std::optional<int>(val.get<int>());
      else if (key == "dst") o.dst = val.is_null() ? std::nullopt : std::optional<int>(val.get<int>());
      else if (key == "model") o.model = val.get<std::string>();
      else if (key == "boundary") o.boundary = val.get<std::string>();
      else if (key == "far-end") o.far_end = val.get<std::string>();
      else if (key == "dxi") o.dxi = val.get<double>();
      else if (key == "courant") o.courant = val.get<double>();
      else if (key == "t-end") o.t_end = val.get<double>();
      else if (key == "stride") o.stride = val.get<std::size_t>();
      else if (key == "record-dt") o.record_dt = val.get<double>();
      else if (key == "csv-every") o.csv_every = val.get<std::size_t>();
      else if (key == "threshold") o.threshold = val.get<double>();
      else if (key == "tol") o.tol = val.get<double>();
      else if (key == "max-rounds") o.max_rounds = val.get<int>();
      else if (key == "serial") o.serial = val.get<bool>();
      else if (key == "param") o.param = val.get<std::string>();
      else if (key == "values") o.values = val.get<std::vector<double>>();
      else if (key == "line") o.line = val.get<std::string>();
      else if (key == "jobs") o.jobs = val.get<int>();
      else if (std::find(std::begin(meta), std::end(meta), key) == std::end(meta)) {
        throw SchemaError("config." + key, "unknown key");
      }
    } catch (const json::exception& e) {
      throw SchemaError("config." + key, e.what());
    }
  }
}

std::optional<std::string> find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

PowerCase load_case(const Options& o) {
  if (o.case_path.empty()) throw CLI::ValidationError("case", "a case file is required");
  return load_case_file(o.case_path, o.sidecar);
}

bool report_violations(const PowerCase& c, std::ostream& err) {
  const auto rep = validate_case(c);
  for (const auto& v : rep.violations) err << "violation [" << v.code << "]: " << v.message << "\n";
  return rep.ok();
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.courant = o.courant;
  cfg.t_end = o.t_end;
  cfg.model = parse_model(o.model);
  cfg.boundary_mode = parse_boundary_mode(o.boundary);
  cfg.far_end = parse_far_end(o.far_end);
  cfg.record_stride = o.stride;
  cfg.record_dt = o.record_dt;
  cfg.dxi = o.dxi;
  cfg.parallel = !o.serial;
  check_config(cfg);
  return cfg;
}

std::string path_line(const EmwPath& p) {
  std::string s;
  for (std::size_t i = 0; i < p.buses.size(); ++i) s += (i ? " -> " : "") + std::to_string(p.buses[i]);
  return s;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

json manifest(const std::string& command, const Options& o, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "emw";
  m["version"] = kVersion;
  m["command"] = command;
  m["case"] = o.case_path;
  m["sidecar"] = o.sidecar;
  m["scenario"] = o.scenario;
  m["src"] = o.src ? json(*o.src) : json(nullptr);
  m["dst"] = o.dst ? json(*o.dst) : json(nullptr);
  m["model"] = o.model;
  m["boundary"] = o.boundary;
  m["far-end"] = o.far_end;
  m["dxi"] = o.dxi;
  m["courant"] = o.courant;
  m["t-end"] = o.t_end;
  m["stride"] = o.stride;
  m["record-dt"] = o.record_dt;
  m["csv-every"] = o.csv_every;
  m["threshold"] = o.threshold;
  m["tol"] = o.tol;
  m["max-rounds"] = o.max_rounds;
  if (command == "sweep") {
    m["param"] = o.param;
    m["values"] = o.values;
    m["line"] = o.line;
  }
  m["out"] = o.out;
  m["outputs"] = outputs;
  return m;
}

struct Prepared {
  PowerCase c;
  Scenario sc;
  int src = 0, dst = 0;
};

Prepared prepare(const Options& o, std::ostream& err) {
  Prepared p;
  p.c = load_case(o);
  if (!report_violations(p.c, err)) throw DomainError("case failed validation");
  if (o.scenario.empty()) throw CLI::ValidationError("scenario", "a scenario file is required");
  p.sc = parse_scenario_json(read_text_file(o.scenario));
  const auto src = o.src ? o.src : p.sc.src;
  const auto dst = o.dst ? o.dst : p.sc.dst;
  if (!src || !dst) throw CLI::ValidationError("src/dst", "source and destination buses are required (flags or scenario)");
  p.src = *src;
  p.dst = *dst;
  return p;
}

EmwPath find_path(const PowerCase& c, int src, int dst, bool parallel) {
  const auto sol = solve_power_flow(c);
  InertiaOptions io;
  io.parallel = parallel;
  const auto map = distribute_inertia(c, io);
  return shortest_emw_path(c, map, sol, src, dst);
}

// ---- commands ----

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const PowerCase c = load_case(o);
  if (!report_violations(c, err)) {
    out << "INVALID: " << validate_case(c).violations.size() << " violation(s)\n";
    return domain_violation;
  }
  out << "OK: " << c.buses.size() << " buses, " << c.lines.size() << " lines, " << c.generators.size()
      << " generators\n";
  return ok;
}

int cmd_powerflow(const Options& o, std::ostream& out, std::ostream& err) {
  const PowerCase c = load_case(o);
  if (!report_violations(c, err)) return domain_violation;
  const auto sol = solve_power_flow(c);
  const std::string csv = power_flow_csv(sol);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text_file(o.out, csv);
    out << "converged in " << sol.iterations << " iterations, max mismatch " << fmt("%.3e", sol.max_mismatch)
        << " pu -> " << o.out << "\n";
  }
  return ok;
}

int cmd_inertia(const Options& o, std::ostream& out, std::ostream& err) {
  const PowerCase c = load_case(o);
  if (!report_violations(c, err)) return domain_violation;
  InertiaOptions io;
  io.tol = o.tol;
  io.max_rounds = o.max_rounds;
  io.parallel = !o.serial;
  const auto map = distribute_inertia(c, io);
  const std::string csv = inertia_csv(c, map);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text_file(o.out, csv);
    double total = 0;
    for (double j : map.j_total) total += j;
    out << "distributed " << fmt("%.6e", total) << " pu s^2 over " << c.lines.size() << " lines in "
        << map.max_rounds_used << " rounds -> " << o.out << "\n";
  }
  return ok;
}

int cmd_path(const Options& o, std::ostream& out, std::ostream& err) {
  const PowerCase c = load_case(o);
  if (!report_violations(c, err)) return domain_violation;
  if (!o.src || !o.dst) throw CLI::ValidationError("src/dst", "--src and --dst are required");
  const EmwPath p = find_path(c, *o.src, *o.dst, !o.serial);
  const std::string js = path_json(c, p);
  if (o.out.empty()) {
    out << js;
  } else {
    write_text_file(o.out, js);
    out << "path: " << path_line(p) << "\ntravel time: " << fmt("%.6f", p.travel_time_s) << " s\n";
  }
  return ok;
}

struct RunSummary {
  double peak_chi = 0;
  std::optional<VelocityEstimate> overall;
  std::vector<std::optional<VelocityEstimate>> seg_v;
  std::vector<double> seg_peaks;
  bool propagated = false;
};

RunSummary summarize(const WaveField& w, double threshold, ArrivalCurve* curve_out = nullptr,
                     std::vector<double>* profile_out = nullptr) {
  RunSummary s;
  const auto curve = detect_arrival_times(w, threshold);
  const auto profile = amplitude_profile(w);
  s.peak_chi = *std::max_element(profile.begin(), profile.end());
  s.propagated = curve.reference > 0;
  try {
    s.overall = estimate_velocity(curve);
  } catch (const DomainError&) {
  }
  s.seg_v = segment_velocities(curve, w.grid);
  s.seg_peaks = segment_mean_peaks(profile, w.grid);
  if (curve_out) *curve_out = curve;
  if (profile_out) *profile_out = profile;
  return s;
}

int cmd_simulate(Options o, std::ostream& out, std::ostream& err) {
  const Prepared pr = prepare(o, err);
  o.src = pr.src;
  o.dst = pr.dst;
  const SolverConfig cfg = solver_config(o);
  if (o.out.empty()) o.out = "emw_out";

  const EmwPath path = find_path(pr.c, pr.src, pr.dst, cfg.parallel);
  out << "path: " << path_line(path) << " (" << fmt("%.3f", path.length_miles) << " miles, predicted travel "
      << fmt("%.4f", path.travel_time_s) << " s)\n";

  const WaveField w = simulate(pr.c, pr.sc.disturbance, path, cfg);
  ArrivalCurve curve;
  std::vector<double> profile;
  const RunSummary s = summarize(w, o.threshold, &curve, &profile);

  ensure_dir(o.out);
  const std::vector<std::string> files = {"wavefield.csv", "grid.csv", "path.json", "arrival.json",
                                          "analysis.json", "manifest.json"};
  write_text_file(o.out + "/wavefield.csv", wavefield_csv(w, o.csv_every));
  write_text_file(o.out + "/grid.csv", grid_csv(w.grid));
  write_text_file(o.out + "/path.json", path_json(pr.c, path));
  write_text_file(o.out + "/arrival.json", arrival_json(curve));
  write_text_file(o.out + "/analysis.json", analysis_json(curve, s.seg_v, s.overall, profile, w.grid));
  write_text_file(o.out + "/manifest.json", manifest("simulate", o, files).dump(2) + "\n");

  out << "model " << to_string(cfg.model) << ", " << w.steps << " steps of " << fmt("%.4e", w.dt) << " s, "
      << w.grid.n_points << " grid points\n";
  if (!s.propagated) {
    out << "no propagation: the disturbance leaves the source flux unchanged\n";
  } else {
    out << analysis_text(w.grid, s.seg_v, s.seg_peaks);
    out << "peak |chi| " << fmt("%.6g", s.peak_chi) << " rad/s";
    if (s.overall) out << ", front velocity " << fmt("%.6g", s.overall->velocity) << " miles/s";
    out << "\n";
  }
  out << "artifacts written to " << o.out << "\n";
  return ok;
}

PowerCase sweep_variant(const PowerCase& base, const std::string& param, double value, std::size_t line) {
  PowerCase c = base;
  if (param == "h") {
    if (!(value > 0)) throw DomainError("inertia constants must be positive");
    for (auto& g : c.generators) g.h_const = value;
  } else {
    if (!(value > 0)) throw DomainError("length factors must be positive");
    auto& l = c.lines[line];
    l.length_miles *= value;
    l.r *= value;
    l.x *= value;
    l.b_shunt *= value;
  }
  finalize_derived(c);
  return c;
}

int cmd_sweep(Options o, std::ostream& out, std::ostream& err) {
  const Prepared pr = prepare(o, err);
  o.src = pr.src;
  o.dst = pr.dst;
  if (o.param != "h" && o.param != "length") throw CLI::ValidationError("param", "expected h or length");
  if (o.values.empty()) throw CLI::ValidationError("values", "at least one value is required");
  if (o.jobs < 1) throw CLI::ValidationError("jobs", "must be >= 1");
  std::size_t line = 0;
  if (o.param == "length") {
    if (o.line.empty()) throw CLI::ValidationError("line", "--line is required for a length sweep");
    line = pr.c.line_index(o.line);
  }
  const SolverConfig cfg = solver_config(o);
  if (o.out.empty()) o.out = "emw_sweep";

  // One path for every member so that segments stay comparable.
  const EmwPath path = find_path(pr.c, pr.src, pr.dst, cfg.parallel);
  std::size_t seg_of_line = 0;
  if (o.param == "length") {
    auto it = std::find(path.lines.begin(), path.lines.end(), line);
    if (it == path.lines.end()) throw DomainError("line " + o.line + " is not on the path " + path_line(path));
    seg_of_line = static_cast<std::size_t>(it - path.lines.begin());
  }

  const long n = static_cast<long>(o.values.size());
  std::vector<RunSummary> results(o.values.size());
  std::vector<std::exception_ptr> errors(o.values.size());
  SolverConfig member_cfg = cfg;
  member_cfg.parallel = cfg.parallel && o.jobs == 1;
#pragma omp parallel for schedule(dynamic) num_threads(o.jobs)
  for (long k = 0; k < n; ++k) {
    const auto u = static_cast<std::size_t>(k);
    try {
      const PowerCase c = sweep_variant(pr.c, o.param, o.values[u], line);
      const WaveField w = simulate(c, pr.sc.disturbance, path, member_cfg);
      results[u] = summarize(w, o.threshold);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ensure_dir(o.out);
  json table = json::array();
  char buf[200];
  const std::string seg_name = std::to_string(path.buses[seg_of_line]) + "-" + std::to_string(path.buses[seg_of_line + 1]);
  std::snprintf(buf, sizeof buf, "%-10s %14s %18s %22s\n", o.param.c_str(), "peak_chi", "front_velocity",
                ("velocity_" + seg_name).c_str());
  out << buf;
  for (std::size_t k = 0; k < o.values.size(); ++k) {
    const auto& r = results[k];
    const auto& sv = r.seg_v[seg_of_line];
    json row;
    row["value"] = o.values[k];
    row["peak_chi"] = r.peak_chi;
    row["front_velocity"] = r.overall ? json(r.overall->velocity) : json(nullptr);
    row["segment"] = seg_name;
    row["segment_velocity"] = sv ? json(sv->velocity) : json(nullptr);
    table.push_back(row);
    std::snprintf(buf, sizeof buf, "%-10g %14.6g %18s %22s\n", o.values[k], r.peak_chi,
                  r.overall ? fmt("%.6g", r.overall->velocity).c_str() : "-", sv ? fmt("%.6g", sv->velocity).c_str() : "-");
    out << buf;

    Options member = o;
    member.values = {o.values[k]};
    const std::string dir = o.out + "/run_" + std::to_string(k);
    ensure_dir(dir);
    write_text_file(dir + "/result.json", row.dump(2) + "\n");
    write_text_file(dir + "/manifest.json", manifest("sweep", member, {"result.json"}).dump(2) + "\n");
  }
  json summary;
  summary["param"] = o.param;
  summary["path"] = path.buses;
  summary["runs"] = table;
  write_text_file(o.out + "/sweep.json", summary.dump(2) + "\n");
  write_text_file(o.out + "/manifest.json", manifest("sweep", o, {"sweep.json"}).dump(2) + "\n");
  out << "artifacts written to " << o.out << "\n";
  return ok;
}

WaveField wavefield_from_table(const WavefieldTable& tab) {
  if (tab.xi.size() < 3) throw DomainError("a wavefield needs at least 3 grid points");
  WaveField w;
  auto& g = w.grid;
  g.n_points = tab.xi.size();
  g.xi = tab.xi;
  g.dxi = tab.xi[1] - tab.xi[0];
  g.b.assign(g.n_points, 0.0);
  g.g = g.j_h = g.nu = g.b;
  Segment seg;
  seg.end = g.n_points - 1;
  g.segments.push_back(seg);
  g.bus_markers = {{0, 0}, {g.n_points - 1, 0}};
  w.times = tab.times;
  for (std::size_t k = 0; k < tab.times.size(); ++k) {
    FieldState s = zero_state(g);
    s.time = tab.times[k];
    s.delta_theta = tab.delta_theta[k];
    s.chi = tab.chi[k];
    s.v = tab.v[k];
    w.snapshots.push_back(std::move(s));
  }
  return w;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream&) {
  if (o.wavefield.empty()) throw CLI::ValidationError("wavefield", "a wavefield CSV is required");
  const WaveField w = wavefield_from_table(parse_wavefield_csv(read_text_file(o.wavefield)));
  const auto curve = detect_arrival_times(w, o.threshold);
  const auto profile = amplitude_profile(w);
  json j;
  j["threshold_frac"] = o.threshold;
  j["reference_chi"] = curve.reference;
  std::optional<VelocityEstimate> v;
  try {
    v = estimate_velocity(curve);
  } catch (const DomainError&) {
  }
  j["front_velocity"] = v ? json(v->velocity) : json(nullptr);
  j["r2"] = v ? json(v->r2) : json(nullptr);
  j["xi_miles"] = curve.xi;
  auto& arr = j["arrival_t"] = json::array();
  for (const auto& a : curve.arrival_t) arr.push_back(a ? json(*a) : json(nullptr));
  j["peak_chi"] = profile;
  if (!o.compare.empty()) {
    const WaveField b = wavefield_from_table(parse_wavefield_csv(read_text_file(o.compare)));
    j["divergence"] = json::parse(divergence_json(compare_models(w, b)));
  }
  const std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
    out << "arrivals detected at " << curve.detected() << " of " << curve.xi.size() << " points";
    if (v) out << ", front velocity " << fmt("%.6g", v->velocity) << " miles/s (r2 " << fmt("%.4f", v->r2) << ")";
    if (j.contains("divergence")) out << ", model divergence " << fmt("%.6e", j["divergence"]["summary_l2_chi"].get<double>());
    out << "\n";
  }
  return ok;
}

int cmd_plot(const Options& o, std::ostream& out, std::ostream&) {
  if (o.wavefield.empty()) throw CLI::ValidationError("wavefield", "a wavefield CSV is required");
  if (o.out.empty()) throw CLI::ValidationError("out", "--out is required");
  const auto kind = plot::parse_kind(o.kind);
  const WavefieldTable tab = parse_wavefield_csv(read_text_file(o.wavefield));
  std::string svg;
  switch (kind) {
    case plot::Kind::surface:
      svg = plot::surface_svg(tab, o.title.empty() ? "delta_theta(xi, t)" : o.title);
      break;
    case plot::Kind::profile:
      svg = plot::profile_svg(tab, o.at.value_or(tab.times.back()), o.title);
      break;
    case plot::Kind::timeseries:
      svg = plot::timeseries_svg(tab, o.at.value_or(tab.xi.front()), o.title);
      break;
  }
  write_text_file(o.out, svg);
  out << "wrote " << o.out << "\n";
  return ok;
}

void add_case_args(CLI::App* sub, Options& o) {
  sub->add_option("case", o.case_path, "Case file (.m MATPOWER or native .json)");
  sub->add_option("--sidecar", o.sidecar, "Sidecar JSON for MATPOWER cases");
}

void add_solver_args(CLI::App* sub, Options& o) {
  sub->add_option("scenario", o.scenario, "Scenario JSON");
  sub->add_option("--src", o.src, "Source bus (overrides the scenario)");
  sub->add_option("--dst", o.dst, "Destination bus (overrides the scenario)");
  sub->add_option("--model", o.model, "hom or nonhom")->check(CLI::IsMember({"hom", "nonhom", "homogeneous", "nonhomogeneous"}));
  sub->add_option("--boundary", o.boundary, "characteristic or fictitious")
      ->check(CLI::IsMember({"characteristic", "fictitious"}));
  sub->add_option("--far-end", o.far_end, "fixed_angle, absorbing or fixed_power")
      ->check(CLI::IsMember({"fixed_angle", "absorbing", "fixed_power"}));
  sub->add_option("--dxi", o.dxi, "Spatial step in miles");
  sub->add_option("--courant", o.courant, "Courant number");
  sub->add_option("--t-end", o.t_end, "Simulated time in seconds");
  sub->add_option("--stride", o.stride, "Record every n-th step");
  sub->add_option("--record-dt", o.record_dt, "Minimum time between recorded snapshots in seconds (0: every stride)");
  sub->add_option("--csv-every", o.csv_every, "Write every n-th recorded snapshot to wavefield.csv");
  sub->add_option("--threshold", o.threshold, "Arrival threshold as a fraction of the source peak");
  sub->add_flag("--serial", o.serial, "Use the serial kernels");
  sub->add_option("--out", o.out, "Output directory");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Electromechanical wave propagation along power-network paths", "emw"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config, "JSON file with option values (flags win)");

  auto* validate = app.add_subcommand("validate", "Check a case file");
  add_case_args(validate, o);

  auto* powerflow = app.add_subcommand("powerflow", "Solve the AC power flow");
  add_case_args(powerflow, o);
  powerflow->add_option("--out", o.out, "CSV output file");

  auto* inertia = app.add_subcommand("distribute-inertia", "Distribute generator inertia over lines");
  add_case_args(inertia, o);
  inertia->add_option("--tol", o.tol, "Termination tolerance (fraction of each generator's inertia)");
  inertia->add_option("--max-rounds", o.max_rounds, "Maximum propagation rounds per generator");
  inertia->add_flag("--serial", o.serial, "Run generator wavefronts serially");
  inertia->add_option("--out", o.out, "CSV output file");

  auto* path = app.add_subcommand("path", "Fastest EMW path between two buses");
  add_case_args(path, o);
  path->add_option("--src", o.src, "Source bus");
  path->add_option("--dst", o.dst, "Destination bus");
  path->add_flag("--serial", o.serial, "Serial inertia distribution");
  path->add_option("--out", o.out, "JSON output file");

  auto* sim = app.add_subcommand("simulate", "Simulate wave propagation along the fastest path");
  add_case_args(sim, o);
  add_solver_args(sim, o);

  auto* sweep = app.add_subcommand("sweep", "Repeat a simulation over inertia constants or a line length factor");
  add_case_args(sweep, o);
  add_solver_args(sweep, o);
  sweep->add_option("--param", o.param, "h or length")->check(CLI::IsMember({"h", "length"}));
  sweep->add_option("--values", o.values, "Comma-separated values")->delimiter(',');
  sweep->add_option("--line", o.line, "Line id for a length sweep, e.g. 8-9");
  sweep->add_option("--jobs", o.jobs, "Concurrent runs");

  auto* analyze = app.add_subcommand("analyze", "Arrival times, velocity and amplitude from a wavefield CSV");
  analyze->add_option("wavefield", o.wavefield, "Wavefield CSV");
  analyze->add_option("--threshold", o.threshold, "Arrival threshold fraction");
  analyze->add_option("--compare", o.compare, "Second wavefield CSV for a model comparison");
  analyze->add_option("--out", o.out, "JSON output file");

  auto* plotc = app.add_subcommand("plot", "Render a wavefield CSV as SVG");
  plotc->add_option("wavefield", o.wavefield, "Wavefield CSV");
  plotc->add_option("--kind", o.kind, "surface, profile or timeseries")->required();
  plotc->add_option("--at", o.at, "Time (profile) or position in miles (timeseries)");
  plotc->add_option("--title", o.title, "Plot title");
  plotc->add_option("--out", o.out, "SVG output file");

  std::string command = "emw";
  try {
    if (auto cfg = find_config_arg(args)) apply_config(parse_json_file(*cfg), o);
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    auto* sub = app.get_subcommands().front();
    command = sub->get_name();
    if (sub == validate) return cmd_validate(o, out, err);
    if (sub == powerflow) return cmd_powerflow(o, out, err);
    if (sub == inertia) return cmd_inertia(o, out, err);
    if (sub == path) return cmd_path(o, out, err);
    if (sub == sim) return cmd_simulate(o, out, err);
    if (sub == sweep) return cmd_sweep(o, out, err);
    if (sub == analyze) return cmd_analyze(o, out, err);
    return cmd_plot(o, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : io_usage;
  } catch (const ParseError& e) {
    err << "error [" << command << "] parse: " << e.what() << "\n";
    return io_usage;
  } catch (const SchemaError& e) {
    err << "error [" << command << "] schema: " << e.what() << "\n";
    return io_usage;
  } catch (const IoError& e) {
    err << "error [" << command << "] io: " << e.what() << "\n";
    return io_usage;
  } catch (const InstabilityError& e) {
    err << "error [" << command << "] solver: " << e.what() << "\n";
    return numerical_failure;
  } catch (const NumericalError& e) {
    err << "error [" << command << "] numerical: " << e.what() << "\n";
    return numerical_failure;
  } catch (const ReferenceError& e) {
    err << "error [" << command << "] reference: " << e.what() << "\n";
    return domain_violation;
  } catch (const DomainError& e) {
    err << "error [" << command << "] domain: " << e.what() << "\n";
    return domain_violation;
  } catch (const Error& e) {
    err << "error [" << command << "]: " << e.what() << "\n";
    return domain_violation;
  }
}

}  // namespace emw::cli
