#include "qz/radial.hpp"

#include "qz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <iomanip>
#include <random>
#include <sstream>

namespace qz {

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

namespace {

// Euler-Maclaurin coefficients of the midpoint rule for the odd derivatives 1, 3, 5.
constexpr double kEm1 = 1.0 / 24.0;
constexpr double kEm3 = -7.0 / 5760.0;
constexpr double kEm5 = 31.0 / 967680.0;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Node index and sign of a (possibly ghost) stencil point.
std::pair<int, double> mirror(int j, Parity parity) {
  if (j >= 0) return {j, 1.0};
  return {-j - 1, parity == Parity::Even ? 1.0 : -1.0};
}

Vec compute_weights(const RadialGrid& g) {
  const int n = g.n;
  const double h = g.h;
  const int d = g.d;
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = h * std::pow(g.nodes[i], d - 1);

  // Outer end: derivatives of F = f xi^(d-1) at r_max from a degree-7 fit through the last 8 nodes.
  {
    const int m = 8;
    Eigen::MatrixXd v(m, m);
    for (int i = 0; i < m; ++i) {
      const double s = g.nodes[n - m + i] - g.r_max;
      for (int k = 0; k < m; ++k) v(i, k) = std::pow(s, k);
    }
    const Eigen::MatrixXd inv = v.inverse();
    for (int i = 0; i < m; ++i) {
      const double c = kEm1 * h * h * factorial(1) * inv(1, i) +
                       kEm3 * std::pow(h, 4) * factorial(3) * inv(3, i) +
                       kEm5 * std::pow(h, 6) * factorial(5) * inv(5, i);
      w[n - m + i] += c * std::pow(g.nodes[n - m + i], d - 1);
    }
  }
  // Origin: for odd d-1 the integrand F = f xi^(d-1) is odd and its odd derivatives
  // do not vanish; estimate them from an odd-polynomial fit through the first four nodes.
  if ((d - 1) % 2 == 1) {
    const int m = 4;
    Eigen::MatrixXd v(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) v(i, k) = std::pow(g.nodes[i], 2 * k + 1);
    const Eigen::MatrixXd inv = v.inverse();
    for (int i = 0; i < m; ++i) {
      const double c = -(kEm1 * h * h * factorial(1) * inv(0, i) +
                         kEm3 * std::pow(h, 4) * factorial(3) * inv(1, i) +
                         kEm5 * std::pow(h, 6) * factorial(5) * inv(2, i));
      w[i] += c * std::pow(g.nodes[i], d - 1);
    }
  }
  return w;
}

// Residuals of the best even (1, xi^2, xi^4) and odd (xi, xi^3, xi^5) fits through the first four nodes.
std::pair<double, double> parity_fit_residuals(const Profile& p) {
  Eigen::Matrix<double, 4, 3> ve, vo;
  Eigen::Vector4d f;
  for (int i = 0; i < 4; ++i) {
    const double x = p.grid->nodes[i] / p.grid->nodes[3];
    for (int k = 0; k < 3; ++k) {
      ve(i, k) = std::pow(x, 2 * k);
      vo(i, k) = std::pow(x, 2 * k + 1);
    }
    f[i] = p.values[i];
  }
  const double re = (ve * ve.colPivHouseholderQr().solve(f) - f).norm();
  const double ro = (vo * vo.colPivHouseholderQr().solve(f) - f).norm();
  return {re, ro};
}

}  // namespace

GridPtr make_grid(int d, double r_max, int n) {
  if (d != 2 && d != 3) throw ValidationError("make_grid: dimension must be 2 or 3, got " + std::to_string(d));
  if (!(r_max > 0.0)) throw ValidationError("make_grid: r_max must be positive");
  if (n < 16) throw ValidationError("make_grid: need at least 16 nodes, got " + std::to_string(n));
  auto g = std::make_shared<RadialGrid>();
  g->d = d;
  g->r_max = r_max;
  g->n = n;
  g->h = r_max / n;
  g->nodes.resize(n);
  for (int i = 0; i < n; ++i) g->nodes[i] = (i + 0.5) * g->h;
  g->weights = compute_weights(*g);
  return g;
}

Profile make_profile(GridPtr grid, Vec values, Parity parity, FarField far_field, TailSeries tail) {
  if (values.size() != grid->n) throw ValidationError("profile size does not match grid");
  Profile p;
  p.grid = std::move(grid);
  p.values = std::move(values);
  p.parity = parity;
  p.far_field = far_field;
  p.tail = std::move(tail);
  return p;
}

Profile sample(GridPtr grid, const std::function<double(double)>& f, Parity parity, FarField far_field) {
  Vec v(grid->n);
  for (int i = 0; i < grid->n; ++i) v[i] = f(grid->nodes[i]);
  return make_profile(std::move(grid), std::move(v), parity, far_field);
}

Eigen::MatrixXd fd_weights(double z, const std::vector<double>& x, int m) {
  const int np = static_cast<int>(x.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, np);
  double c1 = 1.0;
  double c4 = x[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < np; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
        c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
      c(0, j) = c4 * c(0, j) / c3;
    }
    c1 = c2;
  }
  return c;
}

SpMat derivative_matrix(const RadialGrid& g, int order, Parity parity) {
  if (order != 1 && order != 2) throw ValidationError("derivative_matrix: order must be 1 or 2");
  const int n = g.n;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(6 * n));
  std::vector<int> idx;
  std::vector<double> pos;
  for (int i = 0; i < n; ++i) {
    idx.clear();
    if (i + 2 <= n - 1) {
      for (int j = i - 2; j <= i + 2; ++j) idx.push_back(j);
    } else {
      for (int j = n - 6; j <= n - 1; ++j) idx.push_back(j);
    }
    pos.clear();
    for (int j : idx) pos.push_back((j + 0.5) * g.h);
    const Eigen::MatrixXd w = fd_weights(g.nodes[i], pos, order);
    for (size_t k = 0; k < idx.size(); ++k) {
      const auto [col, sign] = mirror(idx[k], parity);
      t.emplace_back(i, col, sign * w(order, static_cast<int>(k)));
    }
  }
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat diag(const Vec& v) {
  SpMat m(v.size(), v.size());
  m.reserve(Eigen::VectorXi::Constant(v.size(), 1));
  for (int i = 0; i < v.size(); ++i) m.insert(i, i) = v[i];
  m.makeCompressed();
  return m;
}

void replace_row(SpMat& a, int row, const std::vector<std::pair<int, double>>& entries) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nonZeros() + entries.size());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.row() != row) t.emplace_back(it.row(), it.col(), it.value());
  for (const auto& [c, v] : entries) t.emplace_back(row, c, v);
  SpMat b(a.rows(), a.cols());
  b.setFromTriplets(t.begin(), t.end());
  a = std::move(b);
}

std::vector<std::pair<int, double>> row_entries(const SpMat& a, int row) {
  std::vector<std::pair<int, double>> out;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      if (it.row() == row) out.emplace_back(static_cast<int>(it.col()), it.value());
  return out;
}

SpMat identity(int n) {
  SpMat m(n, n);
  m.setIdentity();
  return m;
}

SpMat laplacian_matrix(const RadialGrid& g) {
  const Vec c = (g.d - 1) * g.nodes.cwiseInverse();
  SpMat l = derivative_matrix(g, 2, Parity::Even) + diag(c) * derivative_matrix(g, 1, Parity::Even);
  l.makeCompressed();
  return l;
}

SpMat vector_laplacian_matrix(const RadialGrid& g) {
  // For odd p = xi q:  Delta^(1) p = xi * (q'' + (d+1)/xi q'), with q even.
  const Vec c = (g.d + 1) * g.nodes.cwiseInverse();
  SpMat inner = derivative_matrix(g, 2, Parity::Even) + diag(c) * derivative_matrix(g, 1, Parity::Even);
  SpMat l = diag(g.nodes) * inner * diag(g.nodes.cwiseInverse());
  l.makeCompressed();
  return l;
}

Vec origin_extrapolation(const RadialGrid& g) {
  Eigen::Matrix4d v;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) v(i, k) = std::pow(g.nodes[i], 2 * k);
  const Eigen::Matrix4d inv = v.inverse();
  Vec e = Vec::Zero(g.n);
  for (int i = 0; i < 4; ++i) e[i] = inv(0, i);
  return e;
}

double origin_value(const Profile& p) {
  if (p.parity == Parity::Odd) return 0.0;
  return origin_extrapolation(*p.grid).dot(p.values);
}

std::pair<double, double> origin_jet(const Profile& p) {
  Eigen::Matrix4d v;
  Eigen::Vector4d f;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) v(i, k) = std::pow(p.grid->nodes[i], k);
    f[i] = p.values[i];
  }
  const Eigen::Vector4d a = v.partialPivLu().solve(f);
  return {a[0], a[1]};
}

Profile with_values(const Profile& like, Vec values) {
  Profile p = like;
  p.values = std::move(values);
  p.tail.clear();
  return p;
}

Profile derivative(const Profile& p) {
  Profile out = p;
  out.values = derivative_matrix(*p.grid, 1, p.parity) * p.values;
  out.parity = flip(p.parity);
  out.tail = p.far_field == FarField::Free ? tail_derivative(p.tail) : TailSeries{};
  return out;
}

Profile scalar_laplacian(const Profile& p) {
  if (p.parity != Parity::Even)
    throw ValidationError("scalar_laplacian: profile must have even parity");
  const auto [re, ro] = parity_fit_residuals(p);
  if (re > ro) throw ValidationError("scalar_laplacian: data is odd at the origin (parity mismatch)");
  Profile out = p;
  out.values = laplacian_matrix(*p.grid) * p.values;
  out.tail.clear();
  if (p.far_field == FarField::Free) {
    for (const auto& t : p.tail)
      if (t.power * (t.power + p.grid->d - 2) != 0.0)
        out.tail.push_back({t.coeff * t.power * (t.power + p.grid->d - 2), t.power - 2.0});
  }
  return out;
}

Profile vector_radial_laplacian(const Profile& p) {
  if (p.parity != Parity::Odd)
    throw ValidationError("vector_radial_laplacian: profile must have odd parity");
  const auto [re, ro] = parity_fit_residuals(p);
  if (ro > re) throw ValidationError("vector_radial_laplacian: data does not vanish at the origin (parity mismatch)");
  Profile out = p;
  out.values = vector_laplacian_matrix(*p.grid) * p.values;
  out.tail.clear();
  if (p.far_field == FarField::Free) {
    const int d = p.grid->d;
    for (const auto& t : p.tail) {
      const double f = t.power * (t.power + d - 2) - (d - 1);
      if (f != 0.0) out.tail.push_back({t.coeff * f, t.power - 2.0});
    }
  }
  return out;
}

Profile product(const Profile& a, const Profile& b) {
  Profile out = a;
  out.values = a.values.cwiseProduct(b.values);
  out.parity = a.parity * b.parity;
  if (a.far_field == FarField::Free && b.far_field == FarField::Free) {
    out.far_field = FarField::Free;
    out.tail = tail_product(a.tail, b.tail);
  } else {
    out.far_field = FarField::Decaying;
    out.tail.clear();
  }
  return out;
}

Profile scaled(const Profile& a, double s) {
  Profile out = a;
  out.values *= s;
  out.tail = tail_scaled(a.tail, s);
  return out;
}

Profile sum(const Profile& a, const Profile& b, double sb) {
  if (a.parity != b.parity) throw ValidationError("sum: parity mismatch");
  Profile out = a;
  out.values = a.values + sb * b.values;
  TailSeries t;
  if (a.far_field == FarField::Free) t = a.tail;
  if (b.far_field == FarField::Free)
    for (const auto& term : b.tail) t.push_back({sb * term.coeff, term.power});
  out.far_field = (a.far_field == FarField::Free || b.far_field == FarField::Free) ? FarField::Free
                                                                                    : FarField::Decaying;
  out.tail = t;
  return out;
}

TailSeries tail_product(const TailSeries& a, const TailSeries& b) {
  TailSeries out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x.coeff * y.coeff, x.power + y.power});
  return out;
}

TailSeries tail_derivative(const TailSeries& a) {
  TailSeries out;
  for (const auto& x : a)
    if (x.power != 0.0) out.push_back({x.coeff * x.power, x.power - 1.0});
  return out;
}

TailSeries tail_scaled(const TailSeries& a, double s) {
  TailSeries out = a;
  for (auto& x : out) x.coeff *= s;
  return out;
}

double tail_eval(const TailSeries& a, double xi) {
  double s = 0.0;
  for (const auto& x : a) s += x.coeff * std::pow(xi, x.power);
  return s;
}

double tail_integral(const TailSeries& t, double r, int d) {
  double s = 0.0;
  for (const auto& x : t) {
    const double q = x.power + d;
    if (q >= 0.0) throw SolverError("tail_integral: far-field term xi^" + std::to_string(x.power) +
                                    " is not integrable in dimension " + std::to_string(d));
    s += -x.coeff * std::pow(r, q) / q;
  }
  return s;
}

TailSeries fit_tail(const Profile& p, const std::vector<double>& powers, double from_fraction) {
  const RadialGrid& g = *p.grid;
  std::vector<int> rows;
  for (int i = 0; i < g.n; ++i)
    if (g.nodes[i] >= from_fraction * g.r_max) rows.push_back(i);
  const int m = static_cast<int>(powers.size());
  if (static_cast<int>(rows.size()) < 2 * m) throw SolverError("fit_tail: too few far-field nodes");
  Eigen::MatrixXd a(rows.size(), m);
  Vec b(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    const double x = g.nodes[rows[r]] / g.r_max;
    for (int k = 0; k < m; ++k) a(static_cast<int>(r), k) = std::pow(x, powers[k]);
    b[static_cast<int>(r)] = p.values[rows[r]];
  }
  const Vec c = a.colPivHouseholderQr().solve(b);
  TailSeries t;
  for (int k = 0; k < m; ++k) t.push_back({c[k] / std::pow(g.r_max, powers[k]), powers[k]});
  return t;
}

Profile with_fitted_tail(Profile p, const std::vector<double>& powers) {
  p.far_field = FarField::Free;
  p.tail = fit_tail(p, powers);
  return p;
}

double integrate(const RadialGrid& g, const Vec& f) { return g.weights.dot(f); }

double weighted_integral(const Profile& p, std::vector<std::string>* warnings, double tail_tolerance) {
  const RadialGrid& g = *p.grid;
  double s = integrate(g, p.values);
  if (p.far_field == FarField::Free) {
    s += tail_integral(p.tail, g.r_max, g.d);
  } else {
    const double edge = std::abs(p.values[g.n - 1]) * std::pow(g.r_max, g.d - 1);
    if (edge > tail_tolerance && warnings) {
      std::ostringstream os;
      os << "weighted_integral: |p(r_max)| r_max^(d-1) = " << edge << " exceeds tail tolerance "
         << tail_tolerance;
      warnings->push_back(os.str());
    }
  }
  return s;
}

Vec cumulative_integral(const RadialGrid& g, const Vec& f, Parity parity) {
  const int n = g.n;
  const double h = g.h;
  auto val = [&](int j) {
    const auto [k, s] = mirror(j, parity);
    return s * f[k];
  };
  Vec out(n);
  // [0, h/2] from the cubic through xi_{-2}..xi_1.
  {
    Eigen::Matrix4d v;
    Eigen::Vector4d mom;
    for (int k = 0; k < 4; ++k) {
      for (int j = 0; j < 4; ++j) v(k, j) = std::pow((j - 2 + 0.5) * h, k);
      mom[k] = std::pow(0.5 * h, k + 1) / (k + 1);
    }
    const Eigen::Vector4d q = v.partialPivLu().solve(mom);
    out[0] = q[0] * val(-2) + q[1] * val(-1) + q[2] * val(0) + q[3] * val(1);
  }
  for (int i = 0; i + 1 < n; ++i) {
    double piece;
    if (i + 2 <= n - 1)
      piece = h / 24.0 * (-val(i - 1) + 13.0 * val(i) + 13.0 * val(i + 1) - val(i + 2));
    else
      piece = h / 24.0 * (val(i - 2) - 5.0 * val(i - 1) + 19.0 * val(i) + 9.0 * val(i + 1));
    out[i + 1] = out[i] + piece;
  }
  return out;
}

int LinearRadialOperator::bandwidth() const {
  int bw = 0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SpMat::InnerIterator it(matrix, k); it; ++it)
      bw = std::max(bw, static_cast<int>(std::abs(it.row() - it.col())));
  return bw;
}

LinearRadialOperator make_operator(GridPtr grid, SpMat m, Parity solution_parity, std::string name) {
  LinearRadialOperator op;
  op.grid = std::move(grid);
  op.matrix = std::move(m);
  op.solution_parity = solution_parity;
  op.name = std::move(name);
  return op;
}

LinearRadialOperator scalar_laplacian_operator(GridPtr grid) {
  SpMat l = laplacian_matrix(*grid);
  return make_operator(std::move(grid), std::move(l), Parity::Even, "laplacian");
}

LinearRadialOperator identity_operator(GridPtr grid, Parity parity) {
  SpMat i = identity(grid->n);
  return make_operator(std::move(grid), std::move(i), parity, "identity");
}

LinearRadialOperator with_outer_row(LinearRadialOperator op, double a, double b, double value) {
  const RadialGrid& g = *op.grid;
  const int last = g.n - 1;
  std::vector<std::pair<int, double>> entries;
  if (a != 0.0) {
    const SpMat d1 = derivative_matrix(g, 1, op.solution_parity);
    for (int k = 0; k < d1.outerSize(); ++k)
      for (SpMat::InnerIterator it(d1, k); it; ++it)
        if (it.row() == last) entries.emplace_back(static_cast<int>(it.col()), a * it.value());
  }
  entries.emplace_back(last, b);
  replace_row(op.matrix, last, entries);
  op.boundary_rows.erase(std::remove_if(op.boundary_rows.begin(), op.boundary_rows.end(),
                                        [&](const auto& r) { return r.first == last; }),
                         op.boundary_rows.end());
  op.boundary_rows.emplace_back(last, value);
  return op;
}

SparseSolver::SparseSolver(const SpMat& a) : a_(a) {
  a_.makeCompressed();
  lu_ = std::make_shared<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(a_);
  lu_->factorize(a_);
  if (lu_->info() != Eigen::Success)
    throw SolverError("sparse LU factorisation failed (singular matrix): " + lu_->lastErrorMessage());
}

Vec SparseSolver::solve(const Vec& b) const {
  Vec x = lu_->solve(b);
  if (lu_->info() != Eigen::Success || !x.allFinite()) throw SolverError("sparse LU solve failed");
  return x;
}

double SparseSolver::condition_estimate(int iterations) const {
  std::mt19937 rng(12345);
  std::normal_distribution<double> nd;
  Vec x(a_.rows());
  for (int i = 0; i < x.size(); ++i) x[i] = nd(rng);
  x.normalize();
  double growth = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vec y = lu_->solve(x);
    if (!y.allFinite()) return std::numeric_limits<double>::infinity();
    growth = y.norm();
    if (growth == 0.0) break;
    x = y / growth;
  }
  double norm_inf = 0.0;
  Vec rowsum = Vec::Zero(a_.rows());
  for (int k = 0; k < a_.outerSize(); ++k)
    for (SpMat::InnerIterator it(a_, k); it; ++it) rowsum[it.row()] += std::abs(it.value());
  norm_inf = rowsum.maxCoeff();
  return norm_inf * growth;
}

Profile solve_linear_bvp(const LinearRadialOperator& op, const Profile& rhs, BvpReport* report) {
  if (rhs.size() != op.matrix.rows()) throw ValidationError("solve_linear_bvp: size mismatch");
  Vec b = rhs.values;
  for (const auto& [row, value] : op.boundary_rows) b[row] = value;
  const SparseSolver solver(op.matrix);
  const double cond = solver.condition_estimate();
  if (!(cond < 1e13)) {
    std::ostringstream os;
    os << "solve_linear_bvp(" << op.name << "): ill-conditioned system, condition estimate " << cond;
    throw SolverError(os.str());
  }
  Vec x = solver.solve(b);
  const double bn = b.cwiseAbs().maxCoeff();
  const double res = (op.matrix * x - b).cwiseAbs().maxCoeff() / (bn > 0.0 ? bn : 1.0);
  if (!(res < 1e-10)) {
    std::ostringstream os;
    os << "solve_linear_bvp(" << op.name << "): relative residual " << res
       << " (condition estimate " << cond << ")";
    throw SolverError(os.str());
  }
  if (report) {
    report->relative_residual = res;
    report->condition_estimate = cond;
  }
  return make_profile(op.grid, std::move(x), op.solution_parity);
}

double smallest_singular_value(const SpMat& a, int iterations) {
  const SparseSolver lu(a);
  const SpMat at = a.transpose();
  const SparseSolver lut(at);
  std::mt19937 rng(4242);
  std::normal_distribution<double> nd;
  Vec x(a.rows());
  for (int i = 0; i < x.size(); ++i) x[i] = nd(rng);
  x.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    Vec y = lu.solve(lut.solve(x));
    lambda = y.norm();
    x = y / lambda;
  }
  return 1.0 / std::sqrt(lambda);
}

void write_profile_csv(const std::string& path, const Profile& p) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << std::setprecision(17);
  os << "xi,value\n";
  for (int i = 0; i < p.size(); ++i) os << p.grid->nodes[i] << ',' << p.values[i] << '\n';
}

void write_complex_csv(const std::string& path, const RadialGrid& g, const CVec& values) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << std::setprecision(17);
  os << "xi,re,im\n";
  for (int i = 0; i < g.n; ++i) os << g.nodes[i] << ',' << values[i].real() << ',' << values[i].imag() << '\n';
}

Profile read_profile_csv(const std::string& path, int d, Parity parity) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line.rfind("xi,value", 0) != 0) throw ValidationError(path + ": expected header xi,value");
  std::vector<double> xi, val;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    xi.push_back(std::stod(a));
    val.push_back(std::stod(b));
  }
  const int n = static_cast<int>(xi.size());
  if (n < 16) throw ValidationError(path + ": too few rows");
  const double h = 2.0 * xi[0];
  for (int i = 0; i < n; ++i)
    if (std::abs(xi[i] - (i + 0.5) * h) > 1e-9 * (1.0 + xi[i]))
      throw ValidationError(path + ": nodes are not a cell-centred uniform grid");
  auto g = make_grid(d, n * h, n);
  Vec v = Eigen::Map<Vec>(val.data(), n);
  return make_profile(g, v, parity);
}

}  // namespace qz
