#include "qz/cli.hpp"

#include "qz/errors.hpp"
#include "qz/functionals.hpp"
#include "qz/recipes.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace qz::cli {

namespace {

struct GridOpts {
  double r_max = 0.0;
  int n = 0;

  GridSpec resolve(Variant v) const {
    GridSpec g = v == Variant::ThreeD ? default_grid_3d() : default_grid_2d();
    if (r_max > 0.0) g.r_max = r_max;
    if (n > 0) g.n = n;
    return g;
  }
};

void add_grid_options(CLI::App* sub, GridOpts& g) {
  sub->add_option("--rmax", g.r_max, "outer radius of the grid (default depends on the problem)");
  sub->add_option("--n", g.n, "number of grid cells");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Writes the manifest, prints a short JSON summary and turns the pass flag into an exit code.
int finish(RunManifest& m, const std::string& out_dir, const std::string& name,
           std::chrono::steady_clock::time_point t0) {
  m.wall_clock = seconds_since(t0);
  m.write(output_path(out_dir, name + "_manifest.json"));
  std::cout << dump_json(m.to_json()) << '\n';
  return m.passed ? kSuccess : kValidationFailure;
}

json profile_stats(const Profile& p) {
  json j;
  j["origin_value"] = origin_value(p);
  j["max_abs"] = p.values.cwiseAbs().maxCoeff();
  j["int_sq"] = integrate(*p.grid, p.values.cwiseAbs2());
  return j;
}

// ---------------------------------------------------------------- ground-state

struct GroundStateArgs {
  std::string problem = "r2d";
  double a0 = 0.1;
  GridOpts grid;
  std::string out = "ground_state.csv";
};

std::string canonical_problem(const std::string& p) {
  if (p == "r2d" || p == "R") return "r2d";
  if (p == "vortex" || p == "R1") return "vortex";
  if (p == "selfsim2d" || p == "selfsimilar2d") return "selfsim2d";
  if (p == "selfsim3d" || p == "selfsimilar3d") return "selfsim3d";
  throw ValidationError("unknown problem '" + p + "'");
}

// Sibling file of a CSV output, e.g. out.csv -> out_manifest.json
std::string sibling(const std::string& csv, const std::string& suffix) {
  std::string stem = csv;
  if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  return stem + suffix;
}

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

int cmd_ground_state(const GroundStateArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string problem = canonical_problem(a.problem);
  GroundStateBundle b;
  if (problem == "r2d") b = solve_ground_state_2d(a.grid.resolve(Variant::Scalar2d));
  else if (problem == "vortex") b = solve_vortex_ground_state(a.grid.resolve(Variant::Scalar2d));
  else if (problem == "selfsim2d") b = solve_selfsimilar_2d(a.a0, a.grid.resolve(Variant::Scalar2d));
  else b = solve_selfsimilar_3d(a.grid.resolve(Variant::ThreeD));

  RunManifest m;
  m.command = "ground-state";
  m.parameters = {{"problem", problem}, {"r_max", b.grid()->r_max}, {"n", b.grid()->n}};
  if (problem == "selfsim2d") m.parameters["a0"] = a.a0;
  m.grid_hashes[b.problem] = grid_hash(*b.grid());
  m.results["residual_inf"] = b.residual_inf;
  m.results["iterations"] = b.meta.iterations;
  m.results["shooting_parameters"] = b.meta.shooting_parameters;
  m.results["diagnostics"] = b.meta.diagnostics;

  ensure_parent(a.out);
  {
    std::vector<std::string> cols{"xi"};
    for (const auto& [name, p] : b.profiles) cols.push_back(name);
    CsvWriter w(a.out, cols);
    const RadialGrid& g = *b.grid();
    for (int i = 0; i < g.n; ++i) {
      std::vector<double> row{g.nodes[i]};
      for (const auto& [name, p] : b.profiles) row.push_back(p.values[i]);
      w.row(row);
    }
  }
  m.add_output(a.out);
  for (const auto& [name, p] : b.profiles) m.results["profiles"][name] = profile_stats(p);

  if (problem == "r2d") {
    Comparison c{"mass_R", integrate(*b.grid(), b.at("R").values.cwiseAbs2()), 1.8557, 1e-3, false,
                 "int R^2 xi dxi"};
    m.results["comparisons"] = json::array({to_json(c)});
    m.results["identities"] = identities_2d(b);
  } else if (problem == "vortex") {
    Comparison c{"mass_R1", integrate(*b.grid(), b.at("R1").values.cwiseAbs2()), 7.69, 1e-2, false,
                 "int (R1)^2 xi dxi"};
    m.results["comparisons"] = json::array({to_json(c)});
  } else if (problem == "selfsim2d") {
    const GroundStateBundle r = solve_ground_state_2d(a.grid.resolve(Variant::Scalar2d));
    m.results["distance_to_R"] = (b.at("P").values - r.at("R").values).cwiseAbs().maxCoeff();
  } else {
    m.results["identities"] = identities_3d(b);
  }
  m.wall_clock = seconds_since(t0);
  m.write(sibling(a.out, "_manifest.json"));
  std::cout << dump_json(m.to_json()) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- corrections

struct CorrectionArgs {
  std::string variant = "scalar2d";
  double a0 = 1.0;
  GridOpts grid;
  std::string out = ".";
};

int cmd_corrections(const CorrectionArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const Variant v = parse_variant(a.variant);
  const Pipeline pl = run_pipeline(v, a.grid.resolve(v), a.a0);
  RunManifest m;
  m.command = "corrections";
  m.parameters = {{"variant", to_string(v)}, {"r_max", pl.base->grid()->r_max}, {"n", pl.base->grid()->n}};
  if (v == Variant::ThreeD) m.parameters["a0"] = a.a0;
  m.grid_hashes["base"] = grid_hash(*pl.base->grid());
  m.results["residuals"] = pl.corrections.residuals;
  m.results["diagnostics"] = pl.corrections.diagnostics;
  for (const auto& [name, p] : pl.corrections.entries) {
    m.results["profiles"][name] = profile_stats(p);
    const std::string path = output_path(a.out, name + ".csv");
    write_profile_csv(path, p);
    m.add_output(path);
  }
  return finish(m, a.out, "corrections", t0);
}

// ---------------------------------------------------------------- coeffs

int cmd_coeffs(const CorrectionArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const Variant v = parse_variant(a.variant);
  const Pipeline pl = run_pipeline(v, a.grid.resolve(v), a.a0);
  RunManifest m;
  m.command = "coeffs";
  m.parameters = {{"variant", to_string(v)}, {"r_max", pl.base->grid()->r_max}, {"n", pl.base->grid()->n}};
  if (v == Variant::ThreeD) m.parameters["a0"] = a.a0;
  m.grid_hashes["base"] = grid_hash(*pl.base->grid());

  json table = json::array();
  bool ok = true;
  for (const auto& ref : reference_values(v)) {
    Comparison c{ref.name, pl.coefficients.at(ref.name), ref.value, ref.rel_tol, false, ""};
    json j = to_json(c);
    if (v == Variant::ThreeD && depends_on_velocity_scaling(ref.name)) {
      j["status"] = "sensitivity";
      j["note"] = "depends on the a0 factor of the V_i relation";
    } else {
      ok = ok && c.pass();
    }
    table.push_back(j);
  }
  m.results["coefficients"] = table;
  for (const auto& [k, val] : pl.coefficients.values) m.results["values"][k] = val;
  m.results["identities"] = v == Variant::ThreeD ? identities_3d(*pl.base) : identities_2d(*pl.base);
  m.results["warnings"] = pl.coefficients.warnings;
  m.passed = ok;

  const std::string path = output_path(a.out, "coeffs.json");
  write_json(path, m.results["coefficients"]);
  m.add_output(path);
  return finish(m, a.out, "coeffs", t0);
}

// ---------------------------------------------------------------- dynamics

struct DynamicsArgs {
  std::string model = "scalar2d";
  double H = -0.0430;
  double N_tilde = 0.240;
  double N = 5.64;
  double Gamma = 5e-3;
  std::string coeffs = "builtin";
  double start = 0.0;  // y0 in 2D, lambda0 in 3D; 0 picks the upper turning point
  double t_end = 60.0;
  double output_dt = 0.01;
  std::string out = "trajectory.csv";
};

// "builtin" recomputes the coefficients; otherwise a JSON object {name: value} or the
// array written by the coeffs subcommand.
CoefficientSet load_coefficients(const std::string& source, Variant v) {
  if (source == "builtin") return run_pipeline(v, 1.0).coefficients;
  std::ifstream is(source);
  if (!is) throw ValidationError("cannot open coefficient file " + source);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  CoefficientSet c;
  c.variant = v;
  c.provenance = source;
  if (j.is_object() && j.contains("values")) j = j["values"];
  if (j.is_array()) {
    for (const auto& e : j) c.values[e.at("name").get<std::string>()] = e.at("computed").get<double>();
  } else if (j.is_object()) {
    for (const auto& [k, val] : j.items())
      if (val.is_number()) c.values[k] = val.get<double>();
  } else {
    throw ValidationError(source + ": expected a JSON object or array of coefficients");
  }
  return c;
}

int cmd_dynamics(const DynamicsArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string model = a.model == "electro2d" ? "electrostatic2d" : a.model;
  const Variant v = parse_variant(model);
  const CoefficientSet coeffs = load_coefficients(a.coeffs, v);
  DynamicsOptions opt;
  opt.output_dt = a.output_dt;

  RunManifest m;
  m.command = "dynamics";
  m.parameters = {{"model", to_string(v)}, {"H", a.H},         {"Gamma", a.Gamma},  {"coeffs", a.coeffs},
                  {"start", a.start},       {"t_end", a.t_end}, {"output_dt", a.output_dt}};

  LambdaTrajectory tr;
  if (v != Variant::ThreeD) {
    m.parameters["N_tilde"] = a.N_tilde;
    const ReducedParams2D p = make_params_2d(a.H, a.N_tilde, a.Gamma, coeffs);
    tr = integrate_lambda_2d(p, a.start, a.t_end, opt);
    m.results["m"] = {p.m1, p.m2, p.m3};
    if (a.Gamma > 0.0) {
      const auto [ym, yM] = turning_points(p);
      m.results["threshold_gamma"] = threshold_gamma(p);
      m.results["turning_points"] = {ym, yM};
      m.results["period"] = oscillation_period(p).value();
    }
  } else {
    m.parameters["N"] = a.N;
    const ReducedParams3D p = make_params_3d(a.H, a.N, a.Gamma, coeffs);
    tr = integrate_lambda_3d(p, a.start, a.t_end, opt);
    m.results["a0"] = p.a0;
    m.results["turning_radii"] = turning_radii_3d(p);
    if (a.Gamma > 0.0) m.results["period"] = oscillation_period(p, a.start).value();
  }
  m.results["lambda_min"] = tr.lambda_min;
  m.results["lambda_max"] = tr.lambda_max;
  m.results["measured_period"] = tr.period ? json(*tr.period) : json(nullptr);
  m.results["blowup_time"] = tr.blowup_time ? json(*tr.blowup_time) : json(nullptr);
  m.results["terminal_slope"] = tr.terminal_slope ? json(*tr.terminal_slope) : json(nullptr);
  m.results["blowup_exponent"] = tr.blowup_exponent ? json(*tr.blowup_exponent) : json(nullptr);
  m.results["first_integral_residual"] = tr.first_integral_residual;

  ensure_parent(a.out);
  {
    CsvWriter w(a.out, {"t", "lambda", "lambda_t"});
    for (const auto& s : tr.samples) w.row({s.t, s.lambda, s.lambda_t});
  }
  m.add_output(a.out);
  m.wall_clock = seconds_since(t0);
  m.write(sibling(a.out, "_manifest.json"));
  std::cout << dump_json(m.to_json()) << '\n';
  return kSuccess;
}

// ---------------------------------------------------------------- functionals

struct FunctionalArgs {
  int d = 2;
  double c = 2.85;
  double Gamma = 5e-3;
  double C = 1.0;
  std::string field;
  GridOpts grid;
  std::string out = ".";
};

int cmd_functionals(const FunctionalArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  if (a.d != 2 && a.d != 3) throw ValidationError("--d must be 2 or 3");
  FieldState s = a.field.empty()
                     ? gaussian_state(make_grid(a.d, a.grid.r_max > 0 ? a.grid.r_max : 10.0,
                                                a.grid.n > 0 ? a.grid.n : 2000),
                                      a.c, a.Gamma)
                     : read_field_csv(a.field, a.d, a.Gamma);
  RunManifest m;
  m.command = "functionals";
  m.parameters = {{"d", a.d}, {"Gamma", a.Gamma}, {"C", a.C}, {"r_max", s.grid->r_max}, {"n", s.grid->n}};
  if (a.field.empty()) m.parameters["c"] = a.c;
  else m.parameters["field"] = a.field;
  m.grid_hashes["field"] = grid_hash(*s.grid);
  const double N = plasmon_number(s);
  const double H = hamiltonian_scalar(s);
  m.results["N"] = N;
  m.results["H"] = H;
  m.results["gradient_norm_sq"] = gradient_norm_sq(s);
  if (a.Gamma > 0.0) m.results["bound"] = gradient_bound(N, H, a.Gamma, a.d, a.C);
  if (a.d == 2) {
    const GroundStateBundle r = solve_ground_state_2d();
    m.results["N_tilde"] = N - integrate(*r.grid(), r.at("R").values.cwiseAbs2());
  }
  return finish(m, a.out, "functionals", t0);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  SimConfig cfg;
  std::string out_diag = "diagnostics.csv";
  std::string out = ".";
};

int cmd_simulate(const SimulateArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  RunManifest m;
  m.command = "simulate";
  const SimConfig& c = a.cfg;
  m.parameters = {{"d", c.d},
                  {"Gamma", c.Gamma},
                  {"c", c.c},
                  {"r_max", c.r_max},
                  {"n", c.n},
                  {"dt", c.dt},
                  {"t_end", c.t_end},
                  {"output_every", c.output_every},
                  {"snapshot_every", c.snapshot_every},
                  {"yoshida", c.yoshida},
                  {"sponge_fraction", c.sponge_fraction},
                  {"sponge_strength", c.sponge_strength},
                  {"stop_when_underresolved", c.stop_when_underresolved}};
  int snap = 0;
  SnapshotCallback cb;
  if (c.snapshot_every > 0.0) {
    cb = [&](const Simulator& sim, const SimState& s) {
      const std::string path = output_path(a.out, "snapshot_" + std::to_string(snap++) + ".csv");
      write_field_csv(path, sim.to_field_state(s));
      m.add_output(path);
    };
  }
  const SimDiagnostics d = run(c, cb);
  m.grid_hashes["simulator"] = grid_hash(*make_grid(c.d, c.r_max, c.n));

  const std::string path = output_path(a.out, a.out_diag);
  {
    CsvWriter w(path, {"t", "maxE", "lambda_est", "N", "H", "sponge_loss"});
    for (const auto& r : d.rows) w.row({r.t, r.maxE, r.lambda_est, r.N, r.H, r.sponge_loss});
  }
  m.add_output(path);
  json events = json::array();
  for (const auto& e : d.events) events.push_back({{"t", e.t}, {"kind", e.kind}, {"value", e.value}});
  m.results = {{"N0", d.N0},
               {"H0", d.H0},
               {"max_N_drift", d.max_N_drift},
               {"max_H_drift", d.max_H_drift},
               {"sponge_loss_N", d.sponge_loss_N},
               {"sponge_loss_H", d.sponge_loss_H},
               {"dt_max", d.dt_max},
               {"max_amplitude_ratio", d.max_amplitude_ratio},
               {"min_lambda_est", d.min_lambda_est},
               {"underresolved", d.underresolved},
               {"stopped_early", d.stopped_early},
               {"events", events},
               {"warnings", d.warnings}};
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
  return finish(m, a.out, "simulate", t0);
}

// ---------------------------------------------------------------- reproduce, sweep

int cmd_reproduce(const std::string& figure, const std::string& out) {
  static const std::map<std::string, std::string> aliases{
      {"2a", "fig2_top"}, {"2b", "fig2_bottom"}, {"4a", "fig4_top"}, {"4b", "fig4_bottom"}};
  std::vector<std::string> figures;
  if (figure == "all") figures = kFigures;
  else if (aliases.count(figure)) figures = {aliases.at(figure)};
  else figures = {figure};
  bool ok = true;
  json summary = json::array();
  for (const auto& f : figures) {
    const RunManifest m = reproduce(f, out);
    ok = ok && m.passed;
    summary.push_back({{"figure", f}, {"passed", m.passed}, {"comparisons", m.results["comparisons"]}});
  }
  std::cout << dump_json(summary) << '\n';
  return ok ? kSuccess : kValidationFailure;
}

int cmd_sweep(const SweepSpec& spec, const std::string& out) {
  const RunManifest m = sweep(spec, out);
  std::cout << dump_json(m.to_json()) << '\n';
  return kSuccess;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"qzlab: collapse arrest in the quantum Zakharov system"};
  app.set_config("--config", "", "optional TOML/INI file with option values; flags override it");
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());

  GroundStateArgs gs;
  auto* sub_gs = app.add_subcommand("ground-state", "solve a leading-order profile");
  sub_gs->add_option("--problem", gs.problem, "r2d, vortex, selfsim2d or selfsim3d")
      ->check(CLI::IsMember({"r2d", "vortex", "selfsim2d", "selfsim3d", "R", "R1", "selfsimilar2d", "selfsimilar3d"}));
  sub_gs->add_option("--a0", gs.a0, "self-similar parameter (selfsim2d)");
  add_grid_options(sub_gs, gs.grid);
  sub_gs->add_option("--out", gs.out, "profile CSV (xi and one column per profile)");

  CorrectionArgs cr;
  auto* sub_cr = app.add_subcommand("corrections", "solve the correction profiles");
  sub_cr->add_option("--variant", cr.variant, "scalar2d, electrostatic2d or 3d");
  sub_cr->add_option("--a0", cr.a0, "factor in the 3D velocity relation");
  add_grid_options(sub_cr, cr.grid);
  sub_cr->add_option("--out", cr.out, "output directory");

  CorrectionArgs co;
  auto* sub_co = app.add_subcommand("coeffs", "compute the reduced-model coefficients");
  sub_co->add_option("--variant", co.variant, "scalar2d, electrostatic2d or 3d");
  sub_co->add_option("--a0", co.a0, "factor in the 3D velocity relation");
  add_grid_options(sub_co, co.grid);
  sub_co->add_option("--out", co.out, "output directory");

  DynamicsArgs dy;
  auto* sub_dy = app.add_subcommand("dynamics", "integrate the scaling-factor ODE");
  sub_dy->add_option("--model", dy.model, "scalar2d, electro2d or 3d")
      ->check(CLI::IsMember({"scalar2d", "electro2d", "electrostatic2d", "3d", "threeD"}));
  sub_dy->add_option("--hamiltonian,--H", dy.H, "Hamiltonian");
  auto* o_nt = sub_dy->add_option("--ntilde", dy.N_tilde, "plasmon excess N_tilde (2D)");
  auto* o_np = sub_dy->add_option("--nplasmon", dy.N, "plasmon number N (3D)");
  o_nt->excludes(o_np);
  sub_dy->add_option("--gamma", dy.Gamma, "quantum coefficient");
  sub_dy->add_option("--coeffs", dy.coeffs, "builtin or a JSON file of coefficients");
  sub_dy->add_option("--y0,--lambda0", dy.start, "initial y (2D) or lambda (3D); 0 selects the upper turning point");
  sub_dy->add_option("--tend", dy.t_end, "final time");
  sub_dy->add_option("--output-dt", dy.output_dt, "sampling interval");
  sub_dy->add_option("--out", dy.out, "trajectory CSV");

  FunctionalArgs fu;
  auto* sub_fu = app.add_subcommand("functionals", "plasmon number, Hamiltonian and gradient bound of a field");
  sub_fu->add_option("--d", fu.d, "dimension");
  sub_fu->add_option("--c", fu.c, "amplitude of E0 = c exp(-r^2)");
  sub_fu->add_option("--gamma", fu.Gamma, "quantum coefficient");
  sub_fu->add_option("--C", fu.C, "constant of the gradient bound");
  sub_fu->add_option("--field", fu.field, "CSV with columns xi,re,im,n,v instead of the Gaussian");
  add_grid_options(sub_fu, fu.grid);
  sub_fu->add_option("--out", fu.out, "output directory");

  SimulateArgs si;
  auto* sub_si = app.add_subcommand("simulate", "direct simulation of the radial scalar model");
  sub_si->add_option("--d", si.cfg.d, "dimension");
  sub_si->add_option("--gamma", si.cfg.Gamma, "quantum coefficient");
  sub_si->add_option("--c", si.cfg.c, "amplitude of E0 = c exp(-r^2)");
  sub_si->add_option("--rmax", si.cfg.r_max, "outer radius");
  sub_si->add_option("--n", si.cfg.n, "number of cells");
  sub_si->add_option("--dt", si.cfg.dt, "time step");
  sub_si->add_option("--tend", si.cfg.t_end, "final time");
  sub_si->add_option("--output-every", si.cfg.output_every, "diagnostics interval");
  sub_si->add_option("--snapshot-every", si.cfg.snapshot_every, "field snapshot interval, 0 disables");
  sub_si->add_flag("--yoshida", si.cfg.yoshida, "fourth-order composition");
  sub_si->add_flag("--stop-underresolved", si.cfg.stop_when_underresolved, "stop at the resolution floor");
  sub_si->add_option("--sponge-fraction", si.cfg.sponge_fraction, "outer fraction of the domain damped");
  sub_si->add_option("--sponge-strength", si.cfg.sponge_strength, "peak damping rate");
  sub_si->add_option("--out-diag", si.out_diag, "diagnostics CSV file name");
  sub_si->add_option("--out", si.out, "output directory");

  std::string figure, rp_out = ".";
  auto* sub_rp = app.add_subcommand("reproduce", "run a published scenario end to end");
  std::vector<std::string> choices = kFigures;
  choices.push_back("all");
  for (const char* alias : {"2a", "2b", "4a", "4b"}) choices.push_back(alias);
  sub_rp->add_option("--figure,figure", figure, "scenario name")->required()->check(CLI::IsMember(choices));
  sub_rp->add_option("--out", rp_out, "output directory");

  SweepSpec sw;
  std::string sw_variant = "scalar2d", sw_out = ".";
  auto* sub_sw = app.add_subcommand("sweep", "scan the reduced dynamics over a parameter grid");
  sub_sw->add_option("--dim", sw.dim, "2 or 3");
  sub_sw->add_option("--variant", sw_variant, "2D coefficient source");
  sub_sw->add_option("--gamma", sw.gammas, "Gamma values")->delimiter(',');
  sub_sw->add_option("--gamma-fraction", sw.gamma_fractions, "Gamma as fractions of the 2D threshold")
      ->delimiter(',');
  sub_sw->add_option("--H", sw.H, "Hamiltonian values")->delimiter(',');
  sub_sw->add_option("--N", sw.N, "N_tilde (2D) or N (3D) values")->delimiter(',');
  sub_sw->add_option("--c", sw.c, "amplitudes; H and N then come from quadrature")->delimiter(',');
  sub_sw->add_option("--tend", sw.t_end, "integration time, 0 picks about three periods");
  sub_sw->add_option("--threads", sw.threads, "worker threads, 0 uses all cores");
  sub_sw->add_flag("--simulate", sw.simulate, "also run the direct simulation per amplitude");
  sub_sw->add_option("--sim-tend", sw.sim.t_end, "simulation final time");
  sub_sw->add_option("--sim-dt", sw.sim.dt, "simulation time step");
  sub_sw->add_option("--sim-n", sw.sim.n, "simulation cells");
  sub_sw->add_option("--sim-rmax", sw.sim.r_max, "simulation outer radius");
  sub_sw->add_option("--out", sw_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kSuccess : kUsage;
  }

  try {
    if (*sub_gs) return cmd_ground_state(gs);
    if (*sub_cr) return cmd_corrections(cr);
    if (*sub_co) return cmd_coeffs(co);
    if (*sub_dy) return cmd_dynamics(dy);
    if (*sub_fu) return cmd_functionals(fu);
    if (*sub_si) return cmd_simulate(si);
    if (*sub_rp) return cmd_reproduce(figure, rp_out);
    if (*sub_sw) {
      sw.variant = parse_variant(sw_variant);
      return cmd_sweep(sw, sw_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kUsage;
}

}  // namespace qz::cli
