#include "qz/lambda_dynamics.hpp"

#include "qz/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace qz {

namespace ode = boost::numeric::odeint;

ReducedParams2D make_params_2d(double H, double N_tilde, double Gamma, const CoefficientSet& c) {
  if (c.variant == Variant::ThreeD) throw ValidationError("make_params_2d: got a 3D coefficient set");
  ReducedParams2D p{H, N_tilde, Gamma, c.at("m1"), c.at("m2"), c.at("m3")};
  validate(p);
  return p;
}

ReducedParams3D make_params_3d(double H, double N, double Gamma, const CoefficientSet& c) {
  if (c.variant != Variant::ThreeD)
    throw ValidationError("make_params_3d: got a " + to_string(c.variant) + " coefficient set");
  if (!(N > 0.0)) throw ValidationError("make_params_3d: plasmon number must be positive");
  ReducedParams3D p;
  p.H = H;
  p.N = N;
  p.Gamma = Gamma;
  p.a0 = std::sqrt(N / c.at("alpha0"));
  p.m1 = c.at("m1");
  p.m2 = c.at("m2");
  p.m3 = c.at("m3");
  p.m4 = c.at("m4");
  p.m5 = c.at("m5");
  p.m6 = c.at("m6");
  validate(p);
  return p;
}

void validate(const ReducedParams2D& p) {
  if (!(p.m1 > 0.0 && p.m2 > 0.0 && p.m3 > 0.0)) throw ValidationError("2D reduced model needs m1, m2, m3 > 0");
  if (!(p.Gamma >= 0.0)) throw ValidationError("Gamma must be nonnegative");
  if (!std::isfinite(p.H) || !std::isfinite(p.N_tilde)) throw ValidationError("H and N_tilde must be finite");
}

void validate(const ReducedParams3D& p) {
  if (!(p.a0 > 0.0)) throw ValidationError("3D reduced model needs a0 > 0");
  if (!(p.Gamma >= 0.0)) throw ValidationError("Gamma must be nonnegative");
  if (!(p.m1 > 0.0 && p.m4 > 0.0)) throw ValidationError("3D reduced model needs m1, m4 > 0");
  if (!std::isfinite(p.H) || !std::isfinite(p.N)) throw ValidationError("H and N must be finite");
}

double threshold_gamma(const ReducedParams2D& p) {
  validate(p);
  if (!(p.H < 0.0)) throw ValidationError("threshold_gamma: requires H < 0");
  if (p.N_tilde < 0.0) throw ValidationError("threshold_gamma: requires N_tilde >= 0");
  return p.N_tilde * p.N_tilde / (4.0 * std::abs(p.H) * p.m3);
}

std::pair<double, double> turning_points(const ReducedParams2D& p) {
  const double gmax = threshold_gamma(p);
  const double a = std::abs(p.H);
  const double disc = p.N_tilde * p.N_tilde - 4.0 * a * p.Gamma * p.m3;
  if (disc < 0.0 || (p.Gamma > 0.0 && p.Gamma >= gmax)) {
    std::ostringstream os;
    os << "turning_points: Gamma = " << p.Gamma << " is above the threshold " << gmax << ", no real turning points";
    throw ValidationError(os.str());
  }
  // |H| y^2 - N_tilde y + Gamma m3 = 0, small root from the product of the roots
  const double y_max = (p.N_tilde + std::sqrt(disc)) / (2.0 * a);
  const double y_min = p.Gamma * p.m3 / (a * y_max);
  return {y_min, y_max};
}

double y_radicand(const ReducedParams2D& p, double y) {
  return 4.0 * (p.H * y * y + p.N_tilde * y - p.Gamma * p.m3) / (p.m1 + p.m2 * y);
}

double y_acceleration(const ReducedParams2D& p, double y) {
  const double q = p.H * y * y + p.N_tilde * y - p.Gamma * p.m3;
  const double d = p.m1 + p.m2 * y;
  return 2.0 * ((2.0 * p.H * y + p.N_tilde) * d - q * p.m2) / (d * d);
}

namespace {

using State2 = std::array<double, 2>;
using State1 = std::array<double, 1>;

struct YSystem {
  const ReducedParams2D* p;
  void operator()(const State2& s, State2& ds, double) const {
    ds[0] = s[1];
    ds[1] = y_acceleration(*p, s[0]);
  }
};

template <class F>
double bracket_root(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

double signed_sqrt_clamped(double v, double scale) {
  if (v >= 0.0) return std::sqrt(v);
  if (v > -1e-12 * std::max(1.0, scale)) return 0.0;
  return NAN;
}

void finish_extrema(LambdaTrajectory& tr) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : tr.samples) {
    lo = std::min(lo, s.lambda);
    hi = std::max(hi, s.lambda);
  }
  for (double v : tr.minima_values) lo = std::min(lo, v);
  for (double v : tr.maxima_values) hi = std::max(hi, v);
  tr.lambda_min = lo;
  tr.lambda_max = hi;
  const auto& times = tr.minima_times.size() >= 2 ? tr.minima_times : tr.maxima_times;
  if (times.size() >= 2) tr.period = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

}  // namespace

std::pair<double, double> evolve_y_2d(const ReducedParams2D& p, double y, double y_t, double dt, double tolerance) {
  State2 s{y, y_t};
  auto stepper = ode::make_controlled(tolerance, tolerance, ode::runge_kutta_fehlberg78<State2>());
  YSystem sys{&p};
  if (dt != 0.0) ode::integrate_adaptive(stepper, sys, s, 0.0, dt, dt / 100.0);
  return {s[0], s[1]};
}

LambdaTrajectory integrate_lambda_2d(const ReducedParams2D& p, double y0, double t_end, const DynamicsOptions& opt) {
  validate(p);
  if (!(t_end > 0.0)) throw ValidationError("integrate_lambda_2d: t_end must be positive");
  if (!(opt.output_dt > 0.0)) throw ValidationError("integrate_lambda_2d: output_dt must be positive");
  const auto [ym, yM] = turning_points(p);
  if (y0 <= 0.0) y0 = yM;
  const double slack = 1e-12 * yM;
  if (y0 < ym - slack || y0 > yM + slack) {
    std::ostringstream os;
    os << "integrate_lambda_2d: y0 = " << y0 << " outside the allowed region [" << ym << ", " << yM << "]";
    throw ValidationError(os.str());
  }
  const double rad0 = y_radicand(p, y0);
  const double yt0 = -signed_sqrt_clamped(rad0, 1.0);
  if (!std::isfinite(yt0)) throw ValidationError("integrate_lambda_2d: negative radicand at y0");

  const bool classical = p.Gamma == 0.0;
  const double y_switch = opt.lambda_switch * opt.lambda_switch;
  YSystem sys{&p};
  auto stepper = ode::make_controlled(opt.tolerance, opt.tolerance, ode::runge_kutta_fehlberg78<State2>());
  auto advance = [&](State2 s, double t0, double tau) {
    if (tau > 0.0) {
      auto st = ode::make_controlled(opt.tolerance, opt.tolerance, ode::runge_kutta_fehlberg78<State2>());
      ode::integrate_adaptive(st, sys, s, t0, t0 + tau, tau / 8.0);
    }
    return s;
  };

  LambdaTrajectory tr;
  auto record = [&](double t, const State2& s) {
    const double lam = std::sqrt(std::max(s[0], 0.0));
    tr.samples.push_back({t, lam, lam > 0.0 ? s[1] / (2.0 * lam) : -INFINITY});
    tr.first_integral_residual =
        std::max(tr.first_integral_residual, std::abs(s[1] * s[1] - y_radicand(p, s[0])));
  };

  State2 s{y0, yt0};
  double t = 0.0;
  record(t, s);
  bool switched = false;
  double dt_try = opt.output_dt / 8.0;
  while (t < t_end) {
    const double t_next = std::min(t + opt.output_dt, t_end);
    const State2 prev = s;
    const double tp = t;
    ode::integrate_adaptive(stepper, sys, s, t, t_next, dt_try);
    t = t_next;
    // y ~ (t* - t)^2 touches zero and rebounds, possibly between two output times
    const bool dipped = prev[1] < 0.0 && s[1] >= 0.0;
    if (classical && (s[0] < y_switch || dipped)) {
      double hi = t - tp;
      if (s[0] >= y_switch) hi = bracket_root([&](double x) { return advance(prev, tp, x)[1]; }, 0.0, hi);
      const double tau = bracket_root([&](double x) { return advance(prev, tp, x)[0] - y_switch; }, 0.0, hi);
      s = advance(prev, tp, tau);
      t = tp + tau;
      record(t, s);
      switched = true;
      break;
    }
    if (prev[1] < 0.0 && s[1] >= 0.0) {
      const double tau = bracket_root([&](double x) { return advance(prev, tp, x)[1]; }, 0.0, t - tp);
      tr.minima_times.push_back(tp + tau);
      tr.minima_values.push_back(std::sqrt(std::max(advance(prev, tp, tau)[0], 0.0)));
    } else if (prev[1] > 0.0 && s[1] <= 0.0) {
      const double tau = bracket_root([&](double x) { return advance(prev, tp, x)[1]; }, 0.0, t - tp);
      tr.maxima_times.push_back(tp + tau);
      tr.maxima_values.push_back(std::sqrt(std::max(advance(prev, tp, tau)[0], 0.0)));
    }
    if (!(s[0] > 0.0)) throw SolverError("integrate_lambda_2d: y left the positive axis");
    record(t, s);
  }

  if (switched) {
    // With Gamma = 0, lambda_t^2 = (H lambda^2 + N_tilde) / (m1 + m2 lambda^2) is regular at lambda = 0.
    auto speed = [&](double lam) {
      const double y = lam * lam;
      return std::sqrt((p.H * y + p.N_tilde) / (p.m1 + p.m2 * y));
    };
    const double lam_sw = std::sqrt(s[0]);
    const double t_sw = t;
    using boost::math::quadrature::gauss_kronrod;
    const int m = 24;
    double lam_prev = lam_sw, t_cur = t_sw;
    for (int k = 1; k <= m; ++k) {
      const double lam = lam_sw * std::pow(opt.lambda_floor / lam_sw, static_cast<double>(k) / m);
      t_cur += gauss_kronrod<double, 15>::integrate([&](double l) { return 1.0 / speed(l); }, lam, lam_prev);
      lam_prev = lam;
      if (t_cur > t_end) break;
      tr.samples.push_back({t_cur, lam, -speed(lam)});
      if (k == m) {
        tr.blowup_time = t_cur;
        tr.terminal_slope = -speed(lam);
      }
    }
  }
  finish_extrema(tr);
  return tr;
}

double lambda_polynomial_3d(const ReducedParams3D& p, double l) {
  return (((p.H * l - p.m2) * l - p.m6 * p.N) * l - p.m5 * p.Gamma) * l - p.m3 * p.Gamma * p.a0 * p.a0;
}

double lambda_radicand_3d(const ReducedParams3D& p, double l) {
  return lambda_polynomial_3d(p, l) / (l * l * (p.m1 * p.a0 * p.a0 * l * l + p.m4 * l));
}

std::vector<double> turning_radii_3d(const ReducedParams3D& p) {
  validate(p);
  if (!(p.H < 0.0)) throw ValidationError("turning_radii_3d: requires H < 0");
  const double c[4] = {p.m2, p.m6 * p.N, p.m5 * p.Gamma, p.m3 * p.Gamma * p.a0 * p.a0};
  double bound = 1.0;
  for (double v : c) bound = std::max(bound, 1.0 + std::abs(v / p.H));
  std::vector<double> roots;
  const int m = 4000;
  const double lo = 1e-10;
  auto f = [&](double l) { return lambda_polynomial_3d(p, l); };
  double a = lo, fa = f(a);
  for (int k = 1; k <= m; ++k) {
    const double b = lo * std::pow(bound / lo, static_cast<double>(k) / m);
    const double fb = f(b);
    if (fa == 0.0) roots.push_back(a);
    if (fa * fb < 0.0) roots.push_back(bracket_root(f, a, b));
    a = b;
    fa = fb;
  }
  return roots;
}

namespace {

struct Orbit3D {
  double la = 0.0, lb = 0.0;
  double q[3] = {0.0, 0.0, 0.0};  // P = (l - la)(l - lb)(q0 l^2 + q1 l + q2)

  double qr(double l) const { return -((q[0] * l + q[1]) * l + q[2]); }
  double lambda_at(double phi) const { return la + (lb - la) * 0.5 * (1.0 + std::cos(phi)); }
};

Orbit3D bounded_orbit(const ReducedParams3D& p, double lambda0) {
  const auto roots = turning_radii_3d(p);
  std::vector<std::pair<double, double>> allowed;
  for (std::size_t k = 0; k + 1 < roots.size(); ++k) {
    const double mid = 0.5 * (roots[k] + roots[k + 1]);
    if (lambda_polynomial_3d(p, mid) > 0.0) allowed.emplace_back(roots[k], roots[k + 1]);
  }
  if (allowed.empty()) throw ValidationError("3D reduced model: no bounded orbit for these parameters");
  std::pair<double, double> pick = allowed.back();
  if (lambda0 > 0.0) {
    bool found = false;
    for (const auto& iv : allowed)
      if (lambda0 >= iv.first * (1 - 1e-12) && lambda0 <= iv.second * (1 + 1e-12)) {
        pick = iv;
        found = true;
      }
    if (!found) {
      std::ostringstream os;
      os << "3D reduced model: negative radicand at lambda0 = " << lambda0;
      throw ValidationError(os.str());
    }
  }
  Orbit3D o;
  o.la = pick.first;
  o.lb = pick.second;
  // Deflate the quartic by its two turning radii.
  double c[5] = {p.H, -p.m2, -p.m6 * p.N, -p.m5 * p.Gamma, -p.m3 * p.Gamma * p.a0 * p.a0};
  double b[4];
  b[0] = c[0];
  for (int k = 1; k < 4; ++k) b[k] = c[k] + o.la * b[k - 1];
  double e[3];
  e[0] = b[0];
  for (int k = 1; k < 3; ++k) e[k] = b[k] + o.lb * e[k - 1];
  for (int k = 0; k < 3; ++k) o.q[k] = e[k];
  return o;
}

double den3(const ReducedParams3D& p, double l) { return l * l * (p.m1 * p.a0 * p.a0 * l * l + p.m4 * l); }

LambdaTrajectory classical_leg_3d(const ReducedParams3D& p, double lambda0, double t_end, const DynamicsOptions& opt) {
  // H l^2 - m2 l - m6 N = (lu - l) r(l) with r(l) = |H| (l - l2)
  const double a = std::abs(p.H);
  const double lu = (-p.m2 + std::sqrt(p.m2 * p.m2 + 4.0 * a * (-p.m6 * p.N))) / (2.0 * a);
  if (!(lu > 0.0)) throw ValidationError("3D reduced model: no positive turning radius at Gamma = 0");
  const double l2 = -p.m6 * p.N / (p.H * lu);
  if (lambda0 <= 0.0) lambda0 = lu;
  if (lambda0 > lu * (1 + 1e-12)) {
    std::ostringstream os;
    os << "3D reduced model: negative radicand at lambda0 = " << lambda0 << " (turning radius " << lu << ")";
    throw ValidationError(os.str());
  }
  lambda0 = std::min(lambda0, lu);
  auto lam = [&](double psi) { return lu * std::sin(psi) * std::sin(psi); };
  auto g = [&](double l) { return std::sqrt((p.m1 * p.a0 * p.a0 * l + p.m4) / (a * (l - l2))); };
  auto dtau = [&](double psi) { return 2.0 * lu * std::sin(psi) * std::sin(psi) * g(lam(psi)); };
  using boost::math::quadrature::gauss_kronrod;
  auto tau = [&](double psi) { return gauss_kronrod<double, 31>::integrate(dtau, 0.0, psi, 10, 1e-14); };
  const double psi0 = std::asin(std::sqrt(lambda0 / lu));
  const double psi_floor = std::asin(std::sqrt(opt.lambda_floor / lu));

  LambdaTrajectory tr;
  auto slope = [&](double psi) {
    const double l = lam(psi);
    return -(std::cos(psi) / std::sin(psi)) * std::sqrt(a * (l - l2) / (p.m1 * p.a0 * p.a0 * l + p.m4));
  };
  // uniform in psi, then geometric towards the floor
  std::vector<double> psis;
  const int m = 2000;
  for (int k = 0; k <= m; ++k) psis.push_back(psi0 - (psi0 - 0.05 * psi0) * k / m);
  for (int k = 1; k <= 200; ++k) psis.push_back(0.05 * psi0 * std::pow(psi_floor / (0.05 * psi0), k / 200.0));
  double prev_psi = psi0, t_cur = 0.0;
  for (double psi : psis) {
    if (psi < prev_psi) t_cur += gauss_kronrod<double, 15>::integrate(dtau, psi, prev_psi);
    prev_psi = psi;
    if (t_cur > t_end) break;
    const double l = lam(psi);
    const double lt = slope(psi);
    tr.samples.push_back({t_cur, l, lt});
    tr.first_integral_residual =
        std::max(tr.first_integral_residual, std::abs(lt * lt - lambda_radicand_3d(p, l)) / std::max(1.0, lt * lt));
  }
  if (t_cur <= t_end && prev_psi == psis.back()) {
    tr.blowup_time = t_cur;
    tr.terminal_slope = slope(psi_floor);
  }
  // lambda ~ (t* - t)^p, fitted over 1e-6 < lambda / lu < 1e-3
  {
    const int k = 40;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = 0; j < k; ++j) {
      const double ratio = 1e-6 * std::pow(1e3, static_cast<double>(j) / (k - 1));
      const double psi = std::asin(std::sqrt(ratio));
      const double x = std::log(tau(psi));
      const double y = std::log(lu * ratio);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    tr.blowup_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  finish_extrema(tr);
  return tr;
}

}  // namespace

LambdaTrajectory integrate_lambda_3d(const ReducedParams3D& p, double lambda0, double t_end, const DynamicsOptions& opt) {
  validate(p);
  if (!(p.H < 0.0)) throw ValidationError("integrate_lambda_3d: requires H < 0");
  if (!(t_end > 0.0)) throw ValidationError("integrate_lambda_3d: t_end must be positive");
  if (lambda0 > 0.0 && lambda_polynomial_3d(p, lambda0) < -1e-12 * std::max(1.0, std::abs(p.H)))
    throw ValidationError("integrate_lambda_3d: negative radicand at lambda0");
  if (p.Gamma == 0.0) return classical_leg_3d(p, lambda0, t_end, opt);

  const Orbit3D o = bounded_orbit(p, lambda0);
  const double half = 0.5 * (o.lb - o.la);
  double phi0 = 0.0;
  if (lambda0 > 0.0) phi0 = std::acos(std::clamp((lambda0 - o.la) / half - 1.0, -1.0, 1.0));

  // phi advances monotonically: d phi / dt = sqrt(Qr / Den); lambda(phi) bounces between the radii.
  auto rate = [&](double phi) {
    const double l = o.lambda_at(phi);
    return std::sqrt(o.qr(l) / den3(p, l));
  };
  auto sys = [&](const State1& s, State1& ds, double) { ds[0] = rate(s[0]); };
  auto stepper = ode::make_controlled(opt.tolerance, opt.tolerance, ode::runge_kutta_fehlberg78<State1>());
  auto advance = [&](State1 s, double t0, double tau) {
    if (tau > 0.0) {
      auto st = ode::make_controlled(opt.tolerance, opt.tolerance, ode::runge_kutta_fehlberg78<State1>());
      ode::integrate_adaptive(st, sys, s, t0, t0 + tau, tau / 8.0);
    }
    return s;
  };

  LambdaTrajectory tr;
  auto record = [&](double t, double phi) {
    const double l = o.lambda_at(phi);
    const double lt = -half * std::sin(phi) * rate(phi);
    tr.samples.push_back({t, l, lt});
    const double rad = lambda_radicand_3d(p, l);
    tr.first_integral_residual =
        std::max(tr.first_integral_residual, std::abs(lt * lt - rad) / std::max(1.0, std::abs(rad)));
  };
  State1 s{phi0};
  double t = 0.0;
  record(t, s[0]);
  while (t < t_end) {
    const double t_next = std::min(t + opt.output_dt, t_end);
    const State1 prev = s;
    const double tp = t;
    ode::integrate_adaptive(stepper, sys, s, t, t_next, opt.output_dt / 8.0);
    t = t_next;
    const long k0 = static_cast<long>(std::floor(prev[0] / M_PI));
    const long k1 = static_cast<long>(std::floor(s[0] / M_PI));
    for (long k = k0 + 1; k <= k1; ++k) {
      const double target = k * M_PI;
      const double tau = bracket_root([&](double x) { return advance(prev, tp, x)[0] - target; }, 0.0, t - tp);
      if (k % 2 != 0) {
        tr.minima_times.push_back(tp + tau);
        tr.minima_values.push_back(o.la);
      } else {
        tr.maxima_times.push_back(tp + tau);
        tr.maxima_values.push_back(o.lb);
      }
    }
    record(t, s[0]);
  }
  finish_extrema(tr);
  return tr;
}

std::optional<double> oscillation_period(const ReducedParams2D& p) {
  const auto [ym, yM] = turning_points(p);
  if (p.Gamma == 0.0) return std::nullopt;
  // y = ym + (yM - ym)(1 - cos phi)/2 removes the square-root endpoint singularities.
  auto f = [&](double phi) {
    const double y = ym + (yM - ym) * 0.5 * (1.0 - std::cos(phi));
    return std::sqrt(p.m1 + p.m2 * y);
  };
  const double integral = boost::math::quadrature::trapezoidal(f, 0.0, M_PI, 1e-14);
  return integral / std::sqrt(std::abs(p.H));
}

std::optional<double> oscillation_period(const ReducedParams3D& p, double lambda0) {
  validate(p);
  if (p.Gamma == 0.0) return std::nullopt;
  const Orbit3D o = bounded_orbit(p, lambda0);
  auto f = [&](double phi) {
    const double l = o.lambda_at(phi);
    return std::sqrt(den3(p, l) / o.qr(l));
  };
  return 2.0 * boost::math::quadrature::trapezoidal(f, 0.0, M_PI, 1e-14);
}

}  // namespace qz
