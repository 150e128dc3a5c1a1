// Acceptance checks. Prints one PASS/FAIL line per criterion.
//   acceptance              run all criteria
//   acceptance --criterion N

#include "qz/coefficients.hpp"
#include "qz/errors.hpp"
#include "qz/functionals.hpp"
#include "qz/ground_states.hpp"
#include "qz/lambda_dynamics.hpp"
#include "qz/recipes.hpp"
#include "qz/simulator.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace qz;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string num(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

double rel_err(double computed, double ref) { return std::abs(computed - ref) / std::abs(ref); }

void check_rel(Verdict& v, const std::string& name, double computed, double ref, double tol) {
  const double e = rel_err(computed, ref);
  v.require(e <= tol, name + "=" + num(computed, 8) + " ref " + num(ref) + " rel_err " + num(e, 3) + " tol " +
                          num(tol, 3));
}

void check_abs(Verdict& v, const std::string& name, double value, double tol) {
  v.require(std::abs(value) <= tol, name + "=" + num(value, 3) + " tol " + num(tol, 3));
}

double inf_norm(const Vec& x) { return x.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------------------------

void criterion_1(Verdict& v) {
  const GroundStateBundle b = solve_ground_state_2d();
  const Profile& r = b.at("R");
  check_rel(v, "int R^2 xi dxi", integrate(*r.grid, r.values.cwiseAbs2()), 1.8557, 1e-3);
  v.detail << "; R(0)=" << num(b.meta.diagnostics.at("R(0)"), 9) << " residual " << num(b.residual_inf, 3);
}

void criterion_2(Verdict& v) {
  const cli::Pipeline pl = cli::run_pipeline(Variant::Scalar2d);
  check_rel(v, "m1", pl.coefficients.at("m1"), 0.727, 0.01);
  check_rel(v, "m2", pl.coefficients.at("m2"), 0.553, 0.01);
  check_rel(v, "m3", pl.coefficients.at("m3"), 10.785, 0.01);
}

void criterion_3(Verdict& v) {
  const cli::Pipeline pl = cli::run_pipeline(Variant::Electrostatic2d);
  check_rel(v, "m1", pl.coefficients.at("m1"), 24.42, 0.01);
  check_rel(v, "m2", pl.coefficients.at("m2"), 8.14, 0.01);
  check_rel(v, "m3", pl.coefficients.at("m3"), 24.94, 0.01);
  const Profile& r1 = pl.base->at("R1");
  check_rel(v, "int (R1)^2 xi dxi", integrate(*r1.grid, r1.values.cwiseAbs2()), 7.69, 0.01);
}

void criterion_4(Verdict& v) {
  const cli::Pipeline pl = cli::run_pipeline(Variant::ThreeD);
  const GroundStateBundle& b = *pl.base;
  // beta0 is stored normalized by int S0^2 xi^2 dxi (= alpha0)
  check_abs(v, "beta0/alpha0", pl.coefficients.at("beta0") / pl.coefficients.at("alpha0"), 1e-5);
  const CorrectionSet& cs = pl.corrections;
  check_abs(v, "|S5 - S0/2|", inf_norm(cs.at("S5").values - 0.5 * b.at("S0").values), 1e-8);
  check_abs(v, "|N5|", inf_norm(cs.at("N5").values), 1e-8);
  check_abs(v, "|V5|", inf_norm(cs.at("V5").values), 1e-8);
}

void criterion_5(Verdict& v) {
  const cli::Pipeline unit = cli::run_pipeline(Variant::ThreeD, 1.0);
  const double a0 = std::sqrt(5.64 / unit.coefficients.at("alpha0"));
  const cli::Pipeline scen = cli::run_pipeline(Variant::ThreeD, a0);
  int sensitive = 0, unit_matches = 0;
  std::ostringstream sens;
  for (const auto& ref : reference_values(Variant::ThreeD)) {
    const double cu = unit.coefficients.at(ref.name), cs = scen.coefficients.at(ref.name);
    if (rel_err(cu, ref.value) <= ref.rel_tol) ++unit_matches;
    if (depends_on_velocity_scaling(ref.name)) {
      ++sensitive;
      const bool finite = std::isfinite(cu) && std::isfinite(cs);
      if (!finite) v.require(false, ref.name + " not finite");
      sens << (sensitive > 1 ? ", " : "") << ref.name << "=" << num(cu, 5) << "|" << num(cs, 5) << " (ref "
           << ref.value << ")";
    } else {
      check_rel(v, ref.name, scen.coefficients.at(ref.name), ref.value, ref.rel_tol);
      v.require(cu == cs, ref.name + " independent of the velocity factor");
    }
  }
  v.detail << "; sensitivity (factor 1 | " << num(a0, 5) << "): " << sens.str()
           << "; with factor 1 " << unit_matches << "/16 entries lie within 2%";
}

struct Fig2Triple {
  const char* name;
  double H, N_tilde, Gamma;
  double c_derived;
};

void criterion_6(Verdict& v) {
  const cli::Pipeline pl = cli::run_pipeline(Variant::Scalar2d);
  const double mass = integrate(*pl.base->grid(), pl.base->at("R").values.cwiseAbs2());
  for (const Fig2Triple& f : {Fig2Triple{"top", -0.0430, 0.240, 5e-3, 2.90}, Fig2Triple{"bottom", -0.0295, 0.168, 1e-3, 2.85}}) {
    const std::string tag = std::string(f.name) + ".";
    const ReducedParams2D p = make_params_2d(f.H, f.N_tilde, f.Gamma, pl.coefficients);
    const auto [ym, yM] = turning_points(p);
    const double T = oscillation_period(p).value();
    const LambdaTrajectory tr = integrate_lambda_2d(p, 0.0, 11.0 * T);
    check_rel(v, tag + "lambda_min", tr.lambda_min, std::sqrt(ym), 1e-6);
    check_rel(v, tag + "lambda_max", tr.lambda_max, std::sqrt(yM), 1e-6);
    v.require(tr.minima_times.size() >= 10, tag + "minima " + std::to_string(tr.minima_times.size()) + " >= 10");
    check_abs(v, tag + "first_integral", tr.first_integral_residual, 1e-8);

    const ReducedParams2D p0 = make_params_2d(f.H, f.N_tilde, 0.0, pl.coefficients);
    const LambdaTrajectory base = integrate_lambda_2d(p0, 0.0, 100.0);
    v.require(base.blowup_time.has_value(),
              tag + "gamma0 blowup at t=" + (base.blowup_time ? num(*base.blowup_time) : std::string("none")));
    if (base.terminal_slope) check_rel(v, tag + "gamma0 slope", *base.terminal_slope, -std::sqrt(f.N_tilde / p.m1), 1e-3);
    else v.require(false, tag + "gamma0 slope missing");

    const cli::InitialDataValues d = cli::initial_data_2d(f.c_derived, f.Gamma, mass);
    v.detail << "; " << tag << "derived c=" << f.c_derived << " gives H=" << num(d.H, 5) << " N_tilde=" << num(d.N_tilde, 5);
  }
}

void criterion_7(Verdict& v) {
  const cli::Pipeline pl = cli::run_pipeline(Variant::ThreeD, 1.0);
  struct Fig4 {
    const char* name;
    double H, N, Gamma;
  };
  for (const Fig4& f : {Fig4{"top", -18.97, 5.64, 2e-5}, Fig4{"bottom", -0.33, 2.76, 2e-5}}) {
    const std::string tag = std::string(f.name) + ".";
    const ReducedParams3D p = make_params_3d(f.H, f.N, f.Gamma, pl.coefficients);
    const double T = oscillation_period(p).value();
    const LambdaTrajectory tr = integrate_lambda_3d(p, 0.0, 3.5 * T);
    v.require(!tr.blowup_time && tr.lambda_min > 0.0 && tr.period.has_value() && tr.minima_times.size() >= 2,
              tag + "bounded periodic, lambda in [" + num(tr.lambda_min, 5) + ", " + num(tr.lambda_max, 5) +
                  "], period " + num(T, 5));
    const LambdaTrajectory half = integrate_lambda_3d(make_params_3d(f.H, f.N, 0.5 * f.Gamma, pl.coefficients), 0.0, 3.5 * T);
    v.require(half.lambda_min < tr.lambda_min, tag + "lambda_min at Gamma/2 " + num(half.lambda_min, 5) + " < " +
                                                   num(tr.lambda_min, 5));
    const LambdaTrajectory base = integrate_lambda_3d(make_params_3d(f.H, f.N, 0.0, pl.coefficients), 0.0, 20.0);
    if (base.blowup_exponent)
      v.require(std::abs(*base.blowup_exponent - 2.0 / 3.0) <= 0.05,
                tag + "gamma0 exponent " + num(*base.blowup_exponent, 5) + " vs 2/3 tol 0.05");
    else v.require(false, tag + "gamma0 exponent missing");
  }
}

void criterion_8(Verdict& v) {
  {
    SimConfig c;
    c.c = 2.85;
    c.Gamma = 5e-3;
    c.t_end = 5.0;
    const SimDiagnostics d = run(c);
    v.require(d.max_N_drift < 1e-6, "N drift " + num(d.max_N_drift, 3) + " < 1e-6");
    v.require(d.max_H_drift < 1e-4, "H drift " + num(d.max_H_drift, 3) + " < 1e-4");
  }
  {
    SimConfig c;
    c.c = 2.0;  // N = 1.0 < 1.8557
    c.Gamma = 0.0;
    c.t_end = 10.0;
    const SimDiagnostics d = run(c);
    v.require(d.max_amplitude_ratio <= 2.0, "subcritical amplitude ratio " + num(d.max_amplitude_ratio, 4) + " <= 2");
  }
  {
    SimConfig c;
    c.c = 2.85;
    c.Gamma = 0.0;
    c.t_end = 5.0;
    c.dt = 2e-4;
    c.stop_when_underresolved = true;
    const SimDiagnostics d = run(c);
    v.require(d.max_amplitude_ratio >= 10.0, "Gamma=0 amplitude growth " + num(d.max_amplitude_ratio, 4) + " >= 10");
  }
  {
    SimConfig c;
    c.c = 2.85;
    c.Gamma = 5e-3;
    c.t_end = 40.0;
    const SimDiagnostics d = run(c);
    const int minima = d.count_events("lambda_min");
    v.require(d.min_lambda_est > 0.5 && !d.underresolved,
              "Gamma=5e-3 min lambda_est " + num(d.min_lambda_est, 4) + " > 0.5");
    v.require(minima >= 2, "Gamma=5e-3 lambda_est minima " + std::to_string(minima) + " >= 2");
  }
}

void criterion_9(Verdict& v) {
  const GroundStateBundle r = solve_ground_state_2d();
  double prev = INFINITY;
  for (double a0 : {0.2, 0.1, 0.05}) {
    const GroundStateBundle b = solve_selfsimilar_2d(a0);
    const double dist = inf_norm(b.at("P").values - r.at("R").values);
    v.require(dist < prev, "a0=" + num(a0) + " |P-R|=" + num(dist, 5));
    prev = dist;
  }
}

void criterion_10(Verdict& v) {
  const cli::Pipeline pl = cli::run_pipeline(Variant::Scalar2d);
  const ReducedParams2D base = make_params_2d(-0.0430, 0.240, 0.0, pl.coefficients);
  const double gmax = threshold_gamma(base);
  v.detail << "Gamma_max=" << num(gmax, 6);
  ReducedParams2D below = base, above = base;
  below.Gamma = 0.99 * gmax;
  above.Gamma = 1.01 * gmax;
  try {
    const auto [ym, yM] = turning_points(below);
    const LambdaTrajectory tr = integrate_lambda_2d(below, 0.0, 3.0 * oscillation_period(below).value());
    v.require(ym > 0.0 && yM > ym && !tr.blowup_time && tr.minima_times.size() >= 2,
              "0.99 Gamma_max bounded, lambda in [" + num(tr.lambda_min, 5) + ", " + num(tr.lambda_max, 5) + "]");
  } catch (const ValidationError& e) {
    v.require(false, std::string("0.99 Gamma_max: ") + e.what());
  }
  bool rejected = false;
  try {
    turning_points(above);
  } catch (const ValidationError&) {
    rejected = true;
  }
  const double disc = above.N_tilde * above.N_tilde - 4.0 * std::abs(above.H) * above.Gamma * above.m3;
  v.require(rejected && disc < 0.0, "1.01 Gamma_max has no real turning points (discriminant " + num(disc, 3) + ")");
}

struct Criterion {
  std::function<void(Verdict&)> run;
  double time_limit;  // seconds, 0 = none
};

const std::map<int, Criterion>& criteria() {
  static const std::map<int, Criterion> c{
      {1, {criterion_1, 5.0}},  {2, {criterion_2, 30.0}}, {3, {criterion_3, 0.0}},  {4, {criterion_4, 0.0}},
      {5, {criterion_5, 120.0}}, {6, {criterion_6, 0.0}},  {7, {criterion_7, 0.0}},  {8, {criterion_8, 600.0}},
      {9, {criterion_9, 0.0}},  {10, {criterion_10, 0.0}}};
  return c;
}

bool run_one(int id) {
  const Criterion& c = criteria().at(id);
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.time_limit > 0.0) v.require(secs < c.time_limit, "runtime " + num(secs, 3) + " s < " + num(c.time_limit) + " s");
  else v.detail << "; runtime " << num(secs, 3) << " s";
  std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail.str() << std::endl;
  return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (ids.empty())
    for (const auto& [id, c] : criteria()) ids.push_back(id);
  bool ok = true;
  for (int id : ids) {
    if (!criteria().count(id)) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    ok = run_one(id) && ok;
  }
  return ok ? 0 : 1;
}
