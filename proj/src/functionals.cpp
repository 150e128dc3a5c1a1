#include "qz/functionals.hpp"

#include "qz/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qz {

FieldState make_field_state(GridPtr grid, CVec E, Vec n, Vec v, double Gamma) {
  if (!grid) throw ValidationError("field state needs a grid");
  if (E.size() != grid->n || n.size() != grid->n || v.size() != grid->n)
    throw ValidationError("field state profiles must share the grid size");
  if (!(Gamma >= 0.0)) throw ValidationError("Gamma must be nonnegative");
  return FieldState{std::move(grid), std::move(E), std::move(n), std::move(v), Gamma};
}

FieldState gaussian_state(GridPtr grid, double c, double Gamma) {
  const Vec& xi = grid->nodes;
  const Vec e = c * (-xi.cwiseAbs2()).array().exp().matrix();
  const int n = grid->n;
  return make_field_state(grid, e.cast<std::complex<double>>(), -e.cwiseAbs2(), Vec::Zero(n), Gamma);
}

double plasmon_number(const FieldState& s) { return integrate(*s.grid, s.E.cwiseAbs2()); }

double gradient_norm_sq(const FieldState& s) {
  const SpMat d1 = derivative_matrix(*s.grid, 1, Parity::Even);
  const Vec gr = d1 * s.E.real();
  const Vec gi = d1 * s.E.imag();
  // squares of odd functions are even, so the even-function weights apply
  return integrate(*s.grid, gr.cwiseAbs2() + gi.cwiseAbs2());
}

double hamiltonian_scalar(const FieldState& s) {
  const RadialGrid& g = *s.grid;
  const SpMat d1 = derivative_matrix(g, 1, Parity::Even);
  const Vec e2 = s.E.cwiseAbs2();
  double h = gradient_norm_sq(s);
  h += integrate(g, s.n.cwiseProduct(e2) + 0.5 * s.n.cwiseAbs2() + 0.5 * s.v.cwiseAbs2());
  if (s.Gamma != 0.0) {
    const SpMat lap = laplacian_matrix(g);
    const Vec lr = lap * s.E.real();
    const Vec li = lap * s.E.imag();
    const Vec gn = d1 * s.n;
    h += s.Gamma * integrate(g, lr.cwiseAbs2() + li.cwiseAbs2() + 0.5 * gn.cwiseAbs2());
  }
  return h;
}

double gradient_bound(double N, double H, double Gamma, int d, double C) {
  if (!(Gamma > 0.0)) throw ValidationError("gradient_bound: Gamma must be positive");
  if (!(C > 0.0)) throw ValidationError("gradient_bound: C must be positive");
  if (!(N >= 0.0)) throw ValidationError("gradient_bound: N must be nonnegative");
  if (d != 2 && d != 3) throw ValidationError("gradient_bound: dimension must be 2 or 3");
  const double a = std::abs(H);
  const double b = C / Gamma * std::pow(N, 2.0 - d / 4.0);
  if (d == 2) {
    const double s = 0.5 * (b + std::sqrt(b * b + 4.0 * a));
    return s * s;
  }
  // x - |H| - b x^(3/4) is negative at 0 and has a single positive root
  auto f = [&](double x) { return x - a - b * std::pow(x, 0.75); };
  if (a == 0.0 && b == 0.0) return 0.0;
  double hi = std::max({2.0 * a, std::pow(2.0 * b, 4.0), 1e-300}) + 1.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  if (f(0.0) == 0.0) return std::pow(b, 4.0);
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 300;
  auto r = boost::math::tools::toms748_solve(f, 0.0, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

void write_field_csv(const std::string& path, const FieldState& s) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << std::setprecision(17) << "xi,re,im,n,v\n";
  for (int i = 0; i < s.grid->n; ++i)
    os << s.grid->nodes[i] << ',' << s.E[i].real() << ',' << s.E[i].imag() << ',' << s.n[i] << ',' << s.v[i] << '\n';
}

FieldState read_field_csv(const std::string& path, int d, double Gamma) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line.rfind("xi,re,im,n,v", 0) != 0) throw ValidationError(path + ": expected header xi,re,im,n,v");
  std::vector<std::array<double, 5>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::array<double, 5> r{};
    std::string cell;
    for (int k = 0; k < 5; ++k) {
      if (!std::getline(ss, cell, ',')) throw ValidationError(path + ": short row");
      r[k] = std::stod(cell);
    }
    rows.push_back(r);
  }
  const int n = static_cast<int>(rows.size());
  if (n < 16) throw ValidationError(path + ": too few rows");
  const double h = 2.0 * rows[0][0];
  for (int i = 0; i < n; ++i)
    if (std::abs(rows[i][0] - (i + 0.5) * h) > 1e-9 * (1.0 + rows[i][0]))
      throw ValidationError(path + ": nodes are not a cell-centred uniform grid");
  auto g = make_grid(d, n * h, n);
  CVec e(n);
  Vec nn(n), v(n);
  for (int i = 0; i < n; ++i) {
    e[i] = {rows[i][1], rows[i][2]};
    nn[i] = rows[i][3];
    v[i] = rows[i][4];
  }
  return make_field_state(g, e, nn, v, Gamma);
}

}  // namespace qz
