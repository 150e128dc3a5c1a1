#include "qz/ground_states.hpp"

#include "qz/errors.hpp"
#include "qz/newton.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <sstream>

namespace qz {

const Profile& GroundStateBundle::at(const std::string& name) const {
  auto it = profiles.find(name);
  if (it == profiles.end()) throw ValidationError("bundle '" + problem + "' has no profile " + name);
  return it->second;
}

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 2>;

// R'' + R'/xi - ell R/xi^2 - R + R^3 = 0 in 2D, ell = 0 (scalar) or 1 (vortex).
struct RadialNls {
  double ell;
  void operator()(const State& y, State& dy, double xi) const {
    dy[0] = y[1];
    dy[1] = -y[1] / xi + ell * y[0] / (xi * xi) + y[0] - y[0] * y[0] * y[0];
  }
};

State series_start(double param, double ell, double xi0) {
  if (ell == 0.0) {
    const double c = (param - param * param * param) / 4.0;
    return {param + c * xi0 * xi0, 2.0 * c * xi0};
  }
  return {param * xi0 + param / 8.0 * xi0 * xi0 * xi0, param + 3.0 * param / 8.0 * xi0 * xi0};
}

enum class Outcome { Overshoot, Undershoot, Undecided };

auto make_stepper() { return ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<State>()); }

// Overshoot: the profile crosses zero. Undershoot: it turns back up after its descent.
Outcome classify(double param, double ell, double xi0, double xi_end) {
  RadialNls sys{ell};
  State y = series_start(param, ell, xi0);
  auto stepper = make_stepper();
  double xi = xi0;
  bool descending = ell == 0.0;
  const double dx = 0.02;
  while (xi < xi_end) {
    ode::integrate_adaptive(stepper, sys, y, xi, xi + dx, dx / 4);
    xi += dx;
    if (y[0] < 0.0) return Outcome::Overshoot;
    if (y[1] < 0.0) descending = true;
    if (descending && y[1] > 0.0) return Outcome::Undershoot;
  }
  return Outcome::Undecided;
}

double shoot(double lo, double hi, double ell, double xi0) {
  const double xi_end = 25.0;
  if (classify(lo, ell, xi0, xi_end) != Outcome::Undershoot || classify(hi, ell, xi0, xi_end) != Outcome::Overshoot) {
    std::ostringstream os;
    os << "shooting bracket failure: [" << lo << ", " << hi << "] does not separate undershoot from overshoot";
    throw SolverError(os.str());
  }
  for (int k = 0; k < 200 && hi - lo > 4e-16 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Outcome o = classify(mid, ell, xi0, xi_end);
    if (o == Outcome::Overshoot)
      hi = mid;
    else if (o == Outcome::Undershoot)
      lo = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

// Shooting trajectory sampled on the grid while it stays trustworthy, then continued
// with the linear far-field solution K_ell(xi).
Vec shooting_seed(const RadialGrid& g, double param, double ell, double xi0) {
  RadialNls sys{ell};
  State y = series_start(param, ell, xi0);
  auto stepper = make_stepper();
  Vec v = Vec::Zero(g.n);
  double xi = xi0;
  const double amp_floor = 1e-4 * std::abs(param);
  int last = -1;
  bool descending = ell == 0.0;
  for (int i = 0; i < g.n; ++i) {
    ode::integrate_adaptive(stepper, sys, y, xi, g.nodes[i], std::min(0.01, g.nodes[i] - xi));
    xi = g.nodes[i];
    if (y[1] < 0.0) descending = true;
    if (y[0] <= 0.0 || (descending && y[1] > 0.0)) break;
    v[i] = y[0];
    last = i;
    if (descending && y[0] < amp_floor) break;
  }
  if (last < 8) throw SolverError("shooting seed collapsed near the origin");
  const int k = static_cast<int>(ell);
  const double k_last = boost::math::cyl_bessel_k(k, g.nodes[last]);
  for (int i = last + 1; i < g.n; ++i) v[i] = v[last] * boost::math::cyl_bessel_k(k, g.nodes[i]) / k_last;
  return v;
}

double max_abs(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

std::vector<std::pair<int, double>> robin_row(const RadialGrid& g, Parity parity) {
  auto row = row_entries(derivative_matrix(g, 1, parity), g.n - 1);
  row.emplace_back(g.n - 1, 1.0);
  return row;
}

// Newton polish of  L R - R + R^3 = 0  with Robin last row.
GroundStateBundle polish_nls(const std::string& problem, const std::string& name, GridPtr grid,
                             const SpMat& lap, Parity parity, Vec seed, double param) {
  const RadialGrid& g = *grid;
  const int last = g.n - 1;
  const auto robin = robin_row(g, parity);
  const SpMat d1 = derivative_matrix(g, 1, parity);
  auto residual = [&](const Vec& r) {
    Vec f = lap * r - r + r.array().cube().matrix();
    f[last] = d1.row(last).dot(r) + r[last];
    return f;
  };
  auto jacobian = [&](const Vec& r) {
    SpMat j = lap - identity(g.n) + diag((3.0 * r.array().square()).matrix());
    replace_row(j, last, robin);
    return j;
  };
  NewtonOptions opt;
  opt.scale = max_abs(seed);
  opt.tolerance = 1e-11;
  NewtonResult nr = newton_solve(residual, jacobian, std::move(seed), opt);
  if (!nr.converged) {
    std::ostringstream os;
    os << problem << ": Newton polish did not converge, last residual " << nr.residual;
    throw SolverError(os.str());
  }
  const Vec& r = nr.x;
  if ((r.array() <= 0.0).any()) throw SolverError(problem + ": converged profile changes sign");
  GroundStateBundle b;
  b.problem = problem;
  b.profiles.emplace(name, make_profile(grid, r, parity));
  b.residual_inf = max_abs(residual(r)) / max_abs(r);
  b.meta.iterations = nr.iterations;
  b.meta.shooting_parameters = {param};
  return b;
}

void check_spec(const GridSpec& s) {
  if (!(s.r_max >= 8.0)) throw ValidationError("grid r_max must be at least 8");
  if (s.n < 64) throw ValidationError("grid needs at least 64 nodes");
}

}  // namespace

GroundStateBundle solve_ground_state_2d(GridSpec spec) {
  check_spec(spec);
  auto grid = make_grid(2, spec.r_max, spec.n);
  const double xi0 = std::min(1e-3, grid->h / 4);
  const double amp = shoot(2.0, 2.4, 0.0, xi0);
  Vec seed = shooting_seed(*grid, amp, 0.0, xi0);
  auto b = polish_nls("r2d", "R", grid, laplacian_matrix(*grid), Parity::Even, std::move(seed), amp);
  const Vec& r = b.at("R").values;
  for (int i = 1; i < r.size(); ++i)
    if (r[i] > r[i - 1]) throw SolverError("r2d: ground state is not monotone decreasing");
  b.meta.diagnostics["R(0)"] = origin_value(b.at("R"));
  return b;
}

GroundStateBundle solve_vortex_ground_state(GridSpec spec) {
  check_spec(spec);
  auto grid = make_grid(2, spec.r_max, spec.n);
  const double xi0 = std::min(1e-3, grid->h / 4);
  const double slope = shoot(1.0, 1.5, 1.0, xi0);
  Vec seed = shooting_seed(*grid, slope, 1.0, xi0);
  auto b = polish_nls("vortex", "R1", grid, vector_laplacian_matrix(*grid), Parity::Odd, std::move(seed), slope);
  b.meta.diagnostics["R1'(0)"] = origin_jet(b.at("R1")).second;
  return b;
}

namespace {

struct PmSystem {
  const RadialGrid& g;
  double a0;
  SpMat lap;
  std::vector<std::pair<int, double>> robin;
  int sonic = -1;  // node carrying the regularity row, -1 when the sonic point lies outside the grid

  PmSystem(const RadialGrid& grid, double a) : g(grid), a0(a) {
    lap = laplacian_matrix(g);
    robin = robin_row(g, Parity::Even);
    if (a0 > 0.0) {
      const double xs = 1.0 / a0;
      const int k = static_cast<int>(std::lround(xs / g.h - 0.5));
      if (k >= 1 && k <= g.n - 2) sonic = k;
    }
  }

  Vec residual(const Vec& u) const {
    const int n = g.n;
    const Vec p = u.head(n), m = u.tail(n);
    Vec f(2 * n);
    f.head(n) = lap * p - p - m.cwiseProduct(p);
    f[n - 1] = 0.0;
    for (const auto& [c, v] : robin) f[n - 1] += v * p[c];
    const double a2 = a0 * a0, h = g.h;
    // (a0^2 xi^2 - 1) M' + 3 a0^2 xi M = (P^2)', boxed between neighbouring nodes
    for (int j = 0; j + 1 < n; ++j) {
      const double xm = (j + 1) * h;
      f[n + j] = (a2 * xm * xm - 1.0) * (m[j + 1] - m[j]) / h + 1.5 * a2 * xm * (m[j] + m[j + 1]) -
                 (p[j + 1] * p[j + 1] - p[j] * p[j]) / h;
    }
    if (sonic >= 0) {
      const int k = sonic;
      const double xk = g.nodes[k];
      f[2 * n - 1] = (a2 * xk * xk - 1.0) * (m[k + 1] - m[k - 1]) / (2 * h) + 3.0 * a2 * xk * m[k] -
                     (p[k + 1] * p[k + 1] - p[k - 1] * p[k - 1]) / (2 * h);
    } else {
      f[2 * n - 1] = m[n - 1];
    }
    return f;
  }

  SpMat jacobian(const Vec& u) const {
    const int n = g.n;
    const Vec p = u.head(n), m = u.tail(n);
    std::vector<Eigen::Triplet<double>> t;
    SpMat a = lap - identity(n) - diag(m);
    replace_row(a, n - 1, robin);
    for (int k = 0; k < a.outerSize(); ++k)
      for (SpMat::InnerIterator it(a, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i + 1 < n; ++i) t.emplace_back(i, n + i, -p[i]);
    const double a2 = a0 * a0, h = g.h;
    for (int j = 0; j + 1 < n; ++j) {
      const double xm = (j + 1) * h;
      const double c = (a2 * xm * xm - 1.0) / h;
      t.emplace_back(n + j, n + j, -c + 1.5 * a2 * xm);
      t.emplace_back(n + j, n + j + 1, c + 1.5 * a2 * xm);
      t.emplace_back(n + j, j, 2.0 * p[j] / h);
      t.emplace_back(n + j, j + 1, -2.0 * p[j + 1] / h);
    }
    if (sonic >= 0) {
      const int k = sonic;
      const double xk = g.nodes[k];
      const double c = (a2 * xk * xk - 1.0) / (2 * h);
      t.emplace_back(2 * n - 1, n + k + 1, c);
      t.emplace_back(2 * n - 1, n + k - 1, -c);
      t.emplace_back(2 * n - 1, n + k, 3.0 * a2 * xk);
      t.emplace_back(2 * n - 1, k + 1, -2.0 * p[k + 1] / (2 * h));
      t.emplace_back(2 * n - 1, k - 1, 2.0 * p[k - 1] / (2 * h));
    } else {
      t.emplace_back(2 * n - 1, 2 * n - 1, 1.0);
    }
    SpMat j(2 * n, 2 * n);
    j.setFromTriplets(t.begin(), t.end());
    return j;
  }
};

}  // namespace

GroundStateBundle solve_selfsimilar_2d(double a0, GridSpec spec, SelfSimilar2dOptions opt) {
  if (!(a0 >= 0.0) || !(a0 < opt.a0_bracket_max)) {
    std::ostringstream os;
    os << "solve_selfsimilar_2d: a0 = " << a0 << " outside [0, " << opt.a0_bracket_max << ")";
    throw ValidationError(os.str());
  }
  if (!(opt.continuation_step > 0.0)) throw ValidationError("solve_selfsimilar_2d: continuation step must be positive");
  const auto base = solve_ground_state_2d(spec);
  const Profile& r = base.at("R");
  GridPtr grid = r.grid;
  const int n = grid->n;
  GroundStateBundle b;
  b.problem = "selfsim2d";
  b.meta.shooting_parameters = base.meta.shooting_parameters;
  if (a0 == 0.0) {
    b.profiles.emplace("P", r);
    b.profiles.emplace("M", make_profile(grid, -r.values.cwiseAbs2(), Parity::Even));
    b.residual_inf = base.residual_inf;
    b.meta.diagnostics["a0_reached"] = 0.0;
    return b;
  }
  Vec u(2 * n);
  u.head(n) = r.values;
  u.tail(n) = -r.values.cwiseAbs2();
  const int steps = std::max(1, static_cast<int>(std::ceil(a0 / opt.continuation_step - 1e-12)));
  double reached = 0.0;
  int total_iterations = 0;
  double last_residual = 0.0;
  for (int s = 1; s <= steps; ++s) {
    const double a = a0 * s / steps;
    PmSystem sys(*grid, a);
    NewtonOptions nopt;
    nopt.scale = max_abs(r.values);
    nopt.tolerance = 1e-10;
    NewtonResult nr = newton_solve([&](const Vec& x) { return sys.residual(x); },
                                   [&](const Vec& x) { return sys.jacobian(x); }, u, nopt);
    total_iterations += nr.iterations;
    last_residual = nr.residual;
    if (!nr.converged || (nr.x.head(n).array() <= 0.0).any()) {
      std::ostringstream os;
      os << "solve_selfsimilar_2d: continuation failed at a0 = " << a << " (largest a0 reached " << reached
         << ", last residual " << nr.residual << (nr.converged ? ", P changes sign" : "") << ")";
      throw SolverError(os.str());
    }
    u = nr.x;
    reached = a;
  }
  PmSystem sys(*grid, a0);
  b.profiles.emplace("P", make_profile(grid, u.head(n), Parity::Even));
  Profile m = make_profile(grid, u.tail(n), Parity::Even, FarField::Free);
  b.profiles.emplace("M", with_fitted_tail(m, {-3.0}));
  b.residual_inf = max_abs(sys.residual(u)) / max_abs(r.values);
  b.meta.iterations = total_iterations;
  b.meta.diagnostics["a0_reached"] = reached;
  b.meta.diagnostics["sonic_node"] = sys.sonic;
  b.meta.diagnostics["newton_residual"] = last_residual;
  return b;
}

DensityOperators3D density_operators_3d(const RadialGrid& g) {
  if (g.d != 3) throw ValidationError("density_operators_3d: grid must be three-dimensional");
  const SpMat d1 = derivative_matrix(g, 1, Parity::Even);
  const Vec inv2 = g.nodes.cwiseAbs2().cwiseInverse();
  DensityOperators3D ops;
  ops.density = diag(g.nodes) * d1 + 3.5 * identity(g.n);
  SpMat s = diag(inv2) * (diag(g.nodes) * d1 + identity(g.n));
  const Vec e0 = origin_extrapolation(g);
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < e0.size(); ++j)
      if (e0[j] != 0.0) t.emplace_back(i, j, -inv2[i] * e0[j]);
  ops.source = SpMat(g.n, g.n);
  ops.source.setFromTriplets(t.begin(), t.end());
  ops.density.makeCompressed();
  return ops;
}

GroundStateBundle solve_selfsimilar_3d(GridSpec spec) {
  check_spec(spec);
  auto grid = make_grid(3, spec.r_max, spec.n);
  const RadialGrid& g = *grid;
  const int n = g.n;
  const SpMat lap = laplacian_matrix(g);
  const SpMat d1 = derivative_matrix(g, 1, Parity::Even);
  const auto ops = density_operators_3d(g);
  const auto robin = robin_row(g, Parity::Even);

  auto residual = [&](const Vec& u) {
    const Vec s = u.head(n), nn = u.tail(n);
    Vec f(2 * n);
    f.head(n) = lap * s - s - nn.cwiseProduct(s);
    f[n - 1] = d1.row(n - 1).dot(s) + s[n - 1];
    f.tail(n) = ops.density * nn - ops.source * s.cwiseAbs2();
    return f;
  };
  auto jacobian = [&](const Vec& u) {
    const Vec s = u.head(n), nn = u.tail(n);
    SpMat a = lap - identity(n) - diag(nn);
    replace_row(a, n - 1, robin);
    SpMat c = -diag(s);
    replace_row(c, n - 1, {});
    const SpMat lower = -(ops.source * diag(2.0 * s));
    std::vector<Eigen::Triplet<double>> t;
    auto put = [&](const SpMat& m, int r0, int c0) {
      for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
    };
    put(a, 0, 0);
    put(c, 0, n);
    put(lower, n, 0);
    put(ops.density, n, n);
    SpMat j(2 * n, 2 * n);
    j.setFromTriplets(t.begin(), t.end());
    return j;
  };

  Vec u(2 * n);
  for (int i = 0; i < n; ++i) {
    const double x = g.nodes[i];
    u[i] = 2.0752 * std::exp(-x * x / 1.5);
    u[n + i] = -5.3 * std::exp(-x * x);
  }
  NewtonOptions opt;
  opt.scale = 2.0;
  opt.tolerance = 1e-10;
  opt.max_iterations = 100;
  NewtonResult nr = newton_solve(residual, jacobian, u, opt);
  if (!nr.converged) {
    std::ostringstream os;
    os << "solve_selfsimilar_3d: Newton diverged, last residual " << nr.residual;
    throw SolverError(os.str());
  }
  const Vec s0 = nr.x.head(n), n0 = nr.x.tail(n);
  if ((s0.array() <= 0.0).any()) throw SolverError("solve_selfsimilar_3d: S0 changes sign");

  // 5/2 V0 + xi V0' = -(S0^2)'  on odd functions; the only regular solution, no boundary row needed.
  const SpMat d1o = derivative_matrix(g, 1, Parity::Odd);
  const SpMat vop = diag(g.nodes) * d1o + 2.5 * identity(n);
  const Vec rhs = -(d1 * s0.cwiseAbs2());
  const SparseSolver vlu(vop);
  const Vec v0 = vlu.solve(rhs);

  GroundStateBundle b;
  b.problem = "selfsim3d";
  b.profiles.emplace("S0", make_profile(grid, s0, Parity::Even));
  b.profiles.emplace("N0", with_fitted_tail(make_profile(grid, n0, Parity::Even, FarField::Free), kDensityTailPowers));
  b.profiles.emplace("V0", with_fitted_tail(make_profile(grid, v0, Parity::Odd, FarField::Free), kVelocityTailPowers));
  b.residual_inf = max_abs(residual(nr.x)) / max_abs(s0);
  b.meta.iterations = nr.iterations;
  b.meta.shooting_parameters = {origin_value(b.at("S0"))};

  // Second V0 relation: xi^-2 (xi^2 V0)' + 2 N0 + xi N0' = 0.
  const Vec check = (2.0 * g.nodes.cwiseInverse()).cwiseProduct(v0) + d1o * v0 + 2.0 * n0 +
                    g.nodes.cwiseProduct(d1 * n0);
  b.meta.diagnostics["v0_consistency"] = max_abs(check) / max_abs(d1o * v0);
  b.meta.diagnostics["S0(0)"] = origin_value(b.at("S0"));
  b.meta.diagnostics["N0(0)"] = origin_value(b.at("N0"));
  return b;
}

}  // namespace qz
