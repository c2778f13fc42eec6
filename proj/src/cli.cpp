#include "dampedmodes/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "dampedmodes/config.hpp"
#include "dampedmodes/errors.hpp"
#include "dampedmodes/floquet.hpp"
#include "dampedmodes/impedance.hpp"
#include "dampedmodes/medium.hpp"
#include "dampedmodes/modes.hpp"
#include "dampedmodes/spectral.hpp"

namespace dampedmodes {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json cjson(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json rect_json(const Rect& r) {
  return json{{"re_min", r.re_min}, {"re_max", r.re_max}, {"im_min", r.im_min}, {"im_max", r.im_max}};
}

json contour_json(const Contour& c) {
  if (const auto* r = std::get_if<Rect>(&c)) return json{{"rect", rect_json(*r)}};
  const auto& circ = std::get<Circle>(c);
  return json{{"circle", {{"center", cjson(circ.center)}, {"radius", circ.radius}}}};
}

json root_json(const RootResult& r) {
  json j{{"delta", r.delta}, {"omega", cjson(r.omega)}, {"residual", r.residual},
         {"iterations", r.iterations}, {"contour", contour_json(r.contour)}};
  j["winding"] = r.winding ? json(*r.winding) : json(nullptr);
  j["certified"] = r.certified();
  return j;
}

/// Everything a command needs to reproduce its outputs.
struct Run {
  std::string command;
  std::string config_path;
  fs::path out_dir;
  std::string format = "csv";
  json parameters = json::object();
  InterfaceMedium medium;

  json manifest() const {
    json p = parameters;
    p["out_dir"] = out_dir.generic_string();
    p["format"] = format;
    return json{{"schema_version", kSchemaVersion}, {"command", command}, {"config", config_path}, {"parameters", p}};
  }
};

void write_atomic(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(const Run& run, const std::string& name, json body) {
  body["manifest"] = run.manifest();
  write_atomic(run.out_dir / name, body.dump(2) + "\n");
  std::cout << "wrote " << (run.out_dir / name).generic_string() << "\n";
}

/// Tabular output written as CSV or as JSON rows, depending on --format.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_number()) return v.dump();
  return v.get<std::string>();
}

void write_table(const Run& run, const std::string& stem, const Table& t) {
  if (run.format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    write_json(run, stem + ".json", json{{"columns", t.columns}, {"rows", rows}});
    return;
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << "\n";
  }
  write_atomic(run.out_dir / (stem + ".csv"), out.str());
  std::cout << "wrote " << (run.out_dir / (stem + ".csv")).generic_string() << "\n";
}

/// Raised for failures that should exit with kExitDomain but are not library errors.
struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_valid(const InterfaceMedium& m) {
  for (const UnitCell* c : {&m.cell_a, &m.cell_b}) {
    const ValidationReport r = validate_cell(*c);
    if (!r.ok()) {
      std::string msg = "cell " + c->label + " is invalid:";
      for (const auto& issue : r.issues) msg += std::string(" ") + to_string(issue.kind) + " (" + issue.detail + ")";
      throw DomainFailure(msg);
    }
  }
}

// ---------------------------------------------------------------------------
// Options shared by several subcommands
// ---------------------------------------------------------------------------

struct GapOptions {
  int gap_index = 0;
  std::vector<double> seed_interval;
  double omega_max = 15.0;
};

void add_gap_options(CLI::App* sub, GapOptions& g) {
  sub->add_option("--gap-index", g.gap_index, "0-based index into the common real gaps of both cells")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed-interval", g.seed_interval, "manual gap override: lo,hi")
      ->expected(2)
      ->delimiter(',');
  sub->add_option("--omega-max", g.omega_max, "upper end of the real-axis gap scan")->check(CLI::PositiveNumber);
}

void record_gap_options(Run& run, const GapOptions& g) {
  run.parameters["gap_index"] = g.gap_index;
  run.parameters["omega_max"] = g.omega_max;
  if (!g.seed_interval.empty()) run.parameters["seed_interval"] = g.seed_interval;
}

std::vector<Interval> common_gaps(const InterfaceMedium& m, double omega_max) {
  return intersect_gaps(real_gaps(with_damping(m.cell_a, 0.0), m.mu0, omega_max),
                        real_gaps(with_damping(m.cell_b, 0.0), m.mu0, omega_max));
}

/// The selected gap, or nullopt if the index is past the last common gap.
std::optional<Interval> select_gap(const InterfaceMedium& m, const GapOptions& g) {
  if (!g.seed_interval.empty()) {
    const Interval gap{g.seed_interval[0], g.seed_interval[1]};
    if (!(gap.lo < gap.hi)) throw DomainFailure("--seed-interval must satisfy lo < hi");
    return gap;
  }
  const auto gaps = common_gaps(m, g.omega_max);
  if (g.gap_index >= static_cast<int>(gaps.size())) return std::nullopt;
  return gaps[static_cast<std::size_t>(g.gap_index)];
}

Interval require_gap(const InterfaceMedium& m, const GapOptions& g) {
  const auto gap = select_gap(m, g);
  if (!gap) throw DomainFailure("no common gap with index " + std::to_string(g.gap_index));
  return *gap;
}

struct TrackedRoot {
  RootResult seed;  // undamped root
  std::vector<ContinuationStep> trace;
  RootResult root;  // root at the requested damping
};

TrackedRoot track_root(const InterfaceMedium& m, Interval gap, double delta, double initial_step) {
  TrackedRoot t;
  t.seed = find_root_real(m.damped(0.0), gap);
  if (delta > 0.0) {
    t.trace = continuation(m, t.seed, delta, initial_step);
    t.root = final_root(t.trace);
  } else {
    t.root = t.seed;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

json validation_json(const ValidationReport& r) {
  json issues = json::array();
  for (const auto& v : r.issues) issues.push_back(json{{"kind", to_string(v.kind)}, {"detail", v.detail}});
  return json{{"ok", r.ok()}, {"issues", issues}};
}

int cmd_validate(Run& run) {
  const ValidationReport ra = validate_cell(run.medium.cell_a);
  const ValidationReport rb = validate_cell(run.medium.cell_b);
  for (const auto* p : {&ra, &rb}) {
    const std::string label = p == &ra ? "A" : "B";
    std::cout << "cell " << label << ": " << (p->ok() ? "ok" : "INVALID");
    for (const auto& v : p->issues) std::cout << " " << to_string(v.kind) << " (" << v.detail << ")";
    std::cout << "\n";
  }
  const bool ok = ra.ok() && rb.ok();
  write_json(run, "validate.json",
             json{{"ok", ok}, {"cells", {{"A", validation_json(ra)}, {"B", validation_json(rb)}}}});
  return ok ? kExitOk : kExitDomain;
}

struct BandsOptions {
  std::vector<double> deltas;
  double omega_max = 15.0;
  int kappa_points = 101;
};

int cmd_bands(Run& run, const BandsOptions& o) {
  if (o.deltas.empty()) throw DomainFailure("bands: at least one --delta is required");
  if (o.kappa_points < 2) throw DomainFailure("bands: --kappa-points must be at least 2");
  for (double d : o.deltas) {
    if (!(d >= 0.0)) throw DomainFailure("bands: damping values must be nonnegative");
  }
  run.parameters["deltas"] = o.deltas;
  run.parameters["omega_max"] = o.omega_max;
  run.parameters["kappa_points"] = o.kappa_points;

  std::vector<double> kappas(static_cast<std::size_t>(o.kappa_points));
  for (int i = 0; i < o.kappa_points; ++i) kappas[static_cast<std::size_t>(i)] = kPi * i / (o.kappa_points - 1);

  json files = json::array();
  for (const UnitCell* cell : {&run.medium.cell_a, &run.medium.cell_b}) {
    for (std::size_t k = 0; k < o.deltas.size(); ++k) {
      const double delta = o.deltas[k];
      const auto curves = band_curves(*cell, run.medium.mu0, delta, kappas, o.omega_max);
      Table t{{"band_index", "kappa", "omega_re", "omega_im", "delta"}, {}};
      for (const auto& c : curves) {
        for (const auto& p : c.points) t.rows.push_back({c.band_index, p.kappa, p.omega.real(), p.omega.imag(), delta});
      }
      const std::string stem = "bands_" + cell->label + "_" + std::to_string(k);
      write_table(run, stem, t);
      files.push_back(json{{"cell", cell->label}, {"delta", delta}, {"bands", curves.size()},
                           {"file", stem + (run.format == "json" ? ".json" : ".csv")}});
    }
  }
  write_json(run, "bands.json", json{{"files", files}});
  return kExitOk;
}

struct WindowOptions {
  double im_halfwidth = 0.25;
  int density = 40;
};

void add_window_options(CLI::App* sub, WindowOptions& w) {
  sub->add_option("--im-halfwidth", w.im_halfwidth, "half-height of the gap window")->check(CLI::PositiveNumber);
  sub->add_option("--density", w.density, "grid density of the band-point search")->check(CLI::Range(2, 100000));
}

json window_json(const GapWindow& w, Interval seed) {
  return json{{"seed", {{"lo", seed.lo}, {"hi", seed.hi}}},
              {"rect", rect_json(w.rect)},
              {"margin", w.margin},
              {"density", w.density},
              {"delta", w.delta}};
}

GapWindow make_window(Run& run, Interval gap, double delta, const WindowOptions& w) {
  run.parameters["im_halfwidth"] = w.im_halfwidth;
  run.parameters["density"] = w.density;
  return common_gap_window(run.medium.cell_a, run.medium.cell_b, run.medium.mu0, delta, gap, w.im_halfwidth,
                           w.density);
}

int cmd_gaps(Run& run, const GapOptions& g, const WindowOptions& w, double delta) {
  record_gap_options(run, g);
  run.parameters["delta"] = delta;
  const auto ga = real_gaps(with_damping(run.medium.cell_a, 0.0), run.medium.mu0, g.omega_max);
  const auto gb = real_gaps(with_damping(run.medium.cell_b, 0.0), run.medium.mu0, g.omega_max);
  const auto gc = intersect_gaps(ga, gb);
  Table t{{"material", "gap_index", "lo", "hi"}, {}};
  auto add = [&t](const char* name, const std::vector<Interval>& gaps) {
    for (std::size_t i = 0; i < gaps.size(); ++i) t.rows.push_back({name, i, gaps[i].lo, gaps[i].hi});
  };
  add("A", ga);
  add("B", gb);
  add("common", gc);
  write_table(run, "gaps", t);
  const Interval gap = require_gap(run.medium, g);
  write_json(run, "gap_window.json", window_json(make_window(run, gap, delta, w), gap));
  return kExitOk;
}

int cmd_impedance_scan(Run& run, const GapOptions& g, const WindowOptions& w, double delta, int resolution) {
  record_gap_options(run, g);
  run.parameters["delta"] = delta;
  run.parameters["resolution"] = resolution;
  const Interval gap = require_gap(run.medium, g);
  const GapWindow win = make_window(run, gap, delta, w);
  const auto samples = impedance_scan(run.medium.damped(delta), win.rect, resolution, resolution);
  Table t{{"omega_re", "omega_im", "z_re", "z_im", "abs_z", "pole_a", "pole_b"}, {}};
  for (const auto& s : samples) {
    t.rows.push_back({s.omega.real(), s.omega.imag(), s.z.real(), s.z.imag(), std::abs(s.z), s.pole_a, s.pole_b});
  }
  write_table(run, "impedance_scan", t);
  write_json(run, "gap_window.json", window_json(win, gap));
  return kExitOk;
}

Table trace_table(const TrackedRoot& t) {
  Table table{{"delta", "omega_re", "omega_im", "residual", "winding", "step_accepted"}, {}};
  auto row = [&table](const RootResult& r, bool accepted) {
    table.rows.push_back({r.delta, r.omega.real(), r.omega.imag(), r.residual,
                          r.winding ? json(*r.winding) : json(nullptr), accepted});
  };
  if (t.trace.empty()) row(t.seed, true);  // the continuation trace starts at the seed
  for (const auto& s : t.trace) row(s.root, s.accepted);
  return table;
}

int cmd_find_mode(Run& run, const GapOptions& g, double delta, double initial_step) {
  record_gap_options(run, g);
  run.parameters["delta"] = delta;
  run.parameters["initial_step"] = initial_step;
  const auto gap = select_gap(run.medium, g);
  if (!gap) {
    std::cout << "no mode predicted: no common gap with index " << g.gap_index << "\n";
    write_json(run, "find_mode.json", json{{"mode_predicted", false}, {"reason", "no common gap"}});
    return kExitOk;
  }
  const DampedMedium undamped = run.medium.damped(0.0);
  const double inside = gap->mid();
  const BulkIndex ja = bulk_index(undamped.cell_a, undamped.mu0, enclosing_gap(undamped.cell_a, undamped.mu0, inside));
  const BulkIndex jb = bulk_index(undamped.cell_b, undamped.mu0, enclosing_gap(undamped.cell_b, undamped.mu0, inside));
  json body{{"gap", {{"lo", gap->lo}, {"hi", gap->hi}}}, {"bulk_index", {{"A", ja.value}, {"B", jb.value}}}};
  if (ja.value + jb.value != 0) {
    std::cout << "no mode predicted: bulk indices " << ja.value << " and " << jb.value << " do not cancel\n";
    body["mode_predicted"] = false;
    body["reason"] = "bulk indices do not cancel";
    write_json(run, "find_mode.json", body);
    return kExitOk;
  }
  const TrackedRoot t = track_root(run.medium, *gap, delta, initial_step);
  write_table(run, "root_trace", trace_table(t));
  body["mode_predicted"] = true;
  body["undamped_root"] = root_json(t.seed);
  body["root"] = root_json(t.root);
  write_json(run, "find_mode.json", body);
  std::cout << "root at delta=" << num(delta) << ": " << num(t.root.omega.real()) << " " << num(t.root.omega.imag())
            << "i, residual " << num(t.root.residual) << ", winding "
            << (t.root.winding ? std::to_string(*t.root.winding) : "none") << "\n";
  return kExitOk;
}

struct RoucheOptions {
  double delta1 = 0.0;
  double delta2 = 0.0;
  int resolution = 200;
  double window_scale = 4.0;
  double equality_tol = kRoucheEqualityTol;
};

const char* region_name(RoucheRegion r) {
  switch (r) {
    case RoucheRegion::Certified: return "c";
    case RoucheRegion::Violated: return "w";
    case RoucheRegion::Pole: return "pole";
  }
  return "?";
}

int cmd_rouche_map(Run& run, const GapOptions& g, const RoucheOptions& o) {
  record_gap_options(run, g);
  run.parameters["delta1"] = o.delta1;
  run.parameters["delta2"] = o.delta2;
  run.parameters["resolution"] = o.resolution;
  run.parameters["window_scale"] = o.window_scale;
  run.parameters["equality_tol"] = o.equality_tol;
  if (!(o.delta1 >= 0.0 && o.delta2 >= 0.0)) throw DomainFailure("rouche-map: damping values must be nonnegative");
  const Interval gap = require_gap(run.medium, g);
  const cplx w1 = track_root(run.medium, gap, o.delta1, 0.05).root.omega;
  const cplx w2 = track_root(run.medium, gap, o.delta2, 0.05).root.omega;

  // Square window around both roots; equal dampings give the minimal window.
  const double d = std::abs(w1 - w2);
  const double half = std::max(o.window_scale * d, 1e-6);
  const cplx c = 0.5 * (w1 + w2);
  const Rect window{c.real() - half, c.real() + half, c.imag() - half, c.imag() + half};
  const DampedMedium m1 = run.medium.damped(o.delta1);
  const DampedMedium m2 = run.medium.damped(o.delta2);
  const RoucheMap map = rouche_map(m1, m2, window, o.resolution, o.equality_tol);

  Table t{{"omega_re", "omega_im", "region"}, {}};
  for (int j = 0; j < map.ny; ++j) {
    for (int i = 0; i < map.nx; ++i) {
      const cplx w = map.omega_at(i, j);
      t.rows.push_back({w.real(), w.imag(), region_name(map.region_at(i, j))});
    }
  }
  write_table(run, "rouche_raster", t);

  const auto circle = find_enclosing_contour(map, w1, w2);
  json roots1 = json::array(), roots2 = json::array();
  for (const auto& r : map.roots_1) roots1.push_back(root_json(r));
  for (const auto& r : map.roots_2) roots2.push_back(root_json(r));
  json contour{{"all_clear", circle.has_value()}};
  contour["center"] = circle ? cjson(circle->center) : json(nullptr);
  contour["radius"] = circle ? json(circle->radius) : json(nullptr);
  write_json(run, "rouche_contour.json",
             json{{"window", rect_json(window)},
                  {"omega1", cjson(w1)},
                  {"omega2", cjson(w2)},
                  {"slack_at_omega1", rouche_slack(m1, m2, w1)},
                  {"slack_at_omega2", rouche_slack(m1, m2, w2)},
                  {"region_at_omega1", region_name(rouche_classify(m1, m2, w1, o.equality_tol))},
                  {"region_at_omega2", region_name(rouche_classify(m1, m2, w2, o.equality_tol))},
                  {"roots_1", roots1},
                  {"roots_2", roots2},
                  {"counts",
                   {{"c", map.count(RoucheRegion::Certified)},
                    {"w", map.count(RoucheRegion::Violated)},
                    {"pole", map.count(RoucheRegion::Pole)}}},
                  {"contour", contour}});
  return kExitOk;
}

struct ProfileOptions {
  int cells = 20;
  int samples_per_cell = 64;
  std::vector<double> omega;
};

int cmd_mode_profile(Run& run, const GapOptions& g, double delta, const ProfileOptions& o) {
  record_gap_options(run, g);
  run.parameters["delta"] = delta;
  run.parameters["cells"] = o.cells;
  run.parameters["samples_per_cell"] = o.samples_per_cell;
  if (o.cells <= 0) throw DomainFailure("mode-profile: --cells must be positive");
  if (o.samples_per_cell <= 0) throw DomainFailure("mode-profile: --samples-per-cell must be positive");

  cplx omega;
  if (!o.omega.empty()) {
    omega = {o.omega[0], o.omega.size() > 1 ? o.omega[1] : 0.0};
    run.parameters["omega"] = o.omega;
  } else {
    omega = track_root(run.medium, require_gap(run.medium, g), delta, 0.05).root.omega;
  }
  const DampedMedium m = run.medium.damped(delta);
  const ModeProfile p = interface_mode_profile(m, omega, o.cells, o.samples_per_cell);
  const DecayEnvelope env = decay_envelope(m, omega, o.cells);
  const DecayReport rep = verify_decay(p, env, 1);

  const double la = std::abs(env.lambda_a), lb = std::abs(env.lambda_b);
  Table mode{{"x", "u_re", "u_im", "abs_u", "envelope"}, {}};
  for (const auto& s : p.samples) {
    const double f = s.x < 0.0 ? std::pow(la, -s.x) : std::pow(lb, s.x);
    mode.rows.push_back({s.x, s.u.real(), s.u.imag(), std::abs(s.u), f});
  }
  write_table(run, "mode", mode);

  Table lattice{{"n", "u_re", "u_im", "flux_re", "flux_im", "F"}, {}};
  for (const auto& v : p.lattice) {
    lattice.rows.push_back({v.n, v.u.real(), v.u.imag(), v.flux.real(), v.flux.imag(), env.at(v.n)});
  }
  write_table(run, "lattice", lattice);

  write_json(run, "mode_report.json",
             json{{"omega", cjson(omega)},
                  {"lambda_a", cjson(env.lambda_a)},
                  {"lambda_b", cjson(env.lambda_b)},
                  {"interface_mismatch", p.interface_mismatch},
                  {"max_junction_jump", p.max_junction_jump},
                  {"decay",
                   {{"n_min", rep.n_min},
                    {"ratios_checked", rep.ratios_checked},
                    {"bound_u", rep.bound_u},
                    {"bound_flux", rep.bound_flux},
                    {"max_rate_error_u", rep.max_rate_error_u},
                    {"max_rate_error_flux", rep.max_rate_error_flux}}}});
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Bands, gaps, interface impedance and localized modes of damped layered media"};
  app.require_subcommand(1);

  Run run;
  std::string out_dir = ".";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", run.config_path, "medium configuration (JSON)")->required();
    sub->add_option("--out-dir", out_dir, "output directory");
    sub->add_option("--format", run.format, "tabular output format")->check(CLI::IsMember({"csv", "json"}));
  };

  GapOptions gap_opts;
  WindowOptions window_opts;
  std::optional<double> delta;
  auto add_delta = [&](CLI::App* sub) {
    sub->add_option("--delta", delta, "damping parameter (defaults to the config value)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* validate = app.add_subcommand("validate", "check both unit cells");
  add_common(validate);

  BandsOptions bands_opts;
  auto* bands = app.add_subcommand("bands", "band curves per cell and damping value");
  add_common(bands);
  bands->add_option("--delta", bands_opts.deltas, "damping values (repeatable)")->delimiter(',');
  bands->add_option("--omega-max", bands_opts.omega_max, "keep bands below this frequency")
      ->check(CLI::PositiveNumber);
  bands->add_option("--kappa-points", bands_opts.kappa_points, "quasi-momentum grid size on [0, pi]");

  auto* gaps = app.add_subcommand("gaps", "real gaps and the gap window");
  add_common(gaps);
  add_gap_options(gaps, gap_opts);
  add_window_options(gaps, window_opts);
  add_delta(gaps);

  int scan_resolution = 100;
  auto* scan = app.add_subcommand("impedance-scan", "interface impedance over the gap window");
  add_common(scan);
  add_gap_options(scan, gap_opts);
  add_window_options(scan, window_opts);
  add_delta(scan);
  scan->add_option("--resolution", scan_resolution, "grid points per axis")->check(CLI::Range(2, 100000));

  double initial_step = 0.05;
  auto* find = app.add_subcommand("find-mode", "locate the interface mode and track it in damping");
  add_common(find);
  add_gap_options(find, gap_opts);
  add_delta(find);
  find->add_option("--initial-step", initial_step, "first damping step of the continuation")
      ->check(CLI::PositiveNumber);

  RoucheOptions rouche_opts;
  auto* rouche = app.add_subcommand("rouche-map", "regions where the Rouche inequality holds or fails");
  add_common(rouche);
  add_gap_options(rouche, gap_opts);
  rouche->add_option("--delta1", rouche_opts.delta1, "first damping value")->required();
  rouche->add_option("--delta2", rouche_opts.delta2, "second damping value")->required();
  rouche->add_option("--resolution", rouche_opts.resolution, "grid points per axis")->check(CLI::Range(2, 100000));
  rouche->add_option("--window-scale", rouche_opts.window_scale, "window half-width in units of the root distance")
      ->check(CLI::PositiveNumber);
  rouche->add_option("--equality-tol", rouche_opts.equality_tol, "slack below which a point counts as R_w")
      ->check(CLI::PositiveNumber);

  ProfileOptions profile_opts;
  auto* profile = app.add_subcommand("mode-profile", "spatial profile and decay envelope of the mode");
  add_common(profile);
  add_gap_options(profile, gap_opts);
  add_delta(profile);
  profile->add_option("--cells", profile_opts.cells, "cells on each side of the interface");
  profile->add_option("--samples-per-cell", profile_opts.samples_per_cell, "dense samples per cell");
  profile->add_option("--omega", profile_opts.omega, "use this frequency instead of searching: re[,im]")
      ->expected(1, 2)
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  run.command = sub->get_name();
  run.out_dir = out_dir;

  try {
    run.medium = load_medium(run.config_path);
    if (sub == validate) return cmd_validate(run);
    require_valid(run.medium);
    const double d = delta.value_or(run.medium.delta);
    if (sub == bands) return cmd_bands(run, bands_opts);
    if (sub == gaps) return cmd_gaps(run, gap_opts, window_opts, d);
    if (sub == scan) return cmd_impedance_scan(run, gap_opts, window_opts, d, scan_resolution);
    if (sub == find) return cmd_find_mode(run, gap_opts, d, initial_step);
    if (sub == rouche) return cmd_rouche_map(run, gap_opts, rouche_opts);
    if (sub == profile) return cmd_mode_profile(run, gap_opts, d, profile_opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace dampedmodes
