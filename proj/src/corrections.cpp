#include "qz/corrections.hpp"

#include "qz/errors.hpp"

#include <cmath>
#include <sstream>

namespace qz {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Scalar2d: return "scalar2d";
    case Variant::Electrostatic2d: return "electrostatic2d";
    case Variant::ThreeD: return "threeD";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  if (s == "scalar2d") return Variant::Scalar2d;
  if (s == "electrostatic2d") return Variant::Electrostatic2d;
  if (s == "threeD" || s == "3d") return Variant::ThreeD;
  throw ValidationError("unknown variant '" + s + "' (expected scalar2d, electrostatic2d or threeD)");
}

const Profile& CorrectionSet::at(const std::string& name) const {
  auto it = entries.find(name);
  if (it == entries.end()) throw ValidationError("correction set has no entry " + name);
  return it->second;
}

namespace {

double inf_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void append(std::vector<Eigen::Triplet<double>>& t, const SpMat& m, int r0, int c0) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
}

SpMat assemble(const SpMat& a, const SpMat& b, const SpMat& c, const SpMat& d) {
  const int n = static_cast<int>(a.rows());
  std::vector<Eigen::Triplet<double>> t;
  append(t, a, 0, 0);
  append(t, b, 0, n);
  append(t, c, n, 0);
  append(t, d, n, n);
  SpMat m(2 * n, 2 * n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

std::vector<std::pair<int, double>> robin_row(const RadialGrid& g, Parity parity) {
  auto row = row_entries(derivative_matrix(g, 1, parity), g.n - 1);
  row.emplace_back(g.n - 1, 1.0);
  return row;
}

// Interior-row residual relative to the size of the data.
double relative_residual(const Vec& lhs, const Vec& rhs, double scale) {
  const int n = static_cast<int>(lhs.size());
  const double r = inf_norm((lhs - rhs).head(n - 1));
  return r / std::max({inf_norm(rhs), scale, 1e-300});
}

}  // namespace

CoupledSystem2D::CoupledSystem2D(const GroundStateBundle& base, Variant variant) : variant_(variant) {
  if (variant == Variant::Scalar2d) {
    r_ = base.at("R");
    sigma_parity_ = Parity::Even;
  } else if (variant == Variant::Electrostatic2d) {
    r_ = base.at("R1");
    sigma_parity_ = Parity::Odd;
  } else {
    throw ValidationError("CoupledSystem2D: variant must be scalar2d or electrostatic2d");
  }
  const RadialGrid& g = *r_.grid;
  if (g.d != 2) throw ValidationError("CoupledSystem2D: base grid must be two-dimensional");
  const int n = g.n;
  const SpMat lap = laplacian_matrix(g);
  const SpMat lsig = variant == Variant::Scalar2d ? lap : vector_laplacian_matrix(g);
  SpMat a = lsig - identity(n) + diag(r_.values.cwiseAbs2());
  replace_row(a, n - 1, robin_row(g, sigma_parity_));
  SpMat b = -diag(r_.values);
  replace_row(b, n - 1, {});
  SpMat c = -2.0 * lap * diag(r_.values);
  replace_row(c, n - 1, {});
  SpMat d = -lap;
  replace_row(d, n - 1, {{n - 1, 1.0}});
  matrix_ = assemble(a, b, c, d);
  lu_ = std::make_shared<SparseSolver>(matrix_);
}

std::pair<Profile, Profile> CoupledSystem2D::solve(const Vec& f, const Vec& g) const {
  const int n = r_.size();
  if (f.size() != n || g.size() != n) throw ValidationError("CoupledSystem2D::solve: size mismatch");
  Vec b(2 * n);
  b << f, g;
  b[n - 1] = 0.0;
  b[2 * n - 1] = 0.0;
  const Vec x = lu_->solve(b);
  const double res = inf_norm(matrix_ * x - b) / std::max({inf_norm(b), inf_norm(x), 1e-300});
  if (!(res < 1e-9)) {
    std::ostringstream os;
    os << "CoupledSystem2D: linear solve residual " << res << " (operator close to singular)";
    throw SolverError(os.str());
  }
  return {make_profile(r_.grid, x.head(n), sigma_parity_), make_profile(r_.grid, x.tail(n), Parity::Even)};
}

std::pair<Vec, Vec> CoupledSystem2D::apply(const Profile& sigma, const Profile& nu) const {
  const Profile lsig = variant_ == Variant::Scalar2d ? scalar_laplacian(sigma) : vector_radial_laplacian(sigma);
  const Profile r2 = product(r_, r_);
  Vec f = lsig.values - sigma.values + product(r2, sigma).values - product(r_, nu).values;
  Vec g = -scalar_laplacian(nu).values - 2.0 * scalar_laplacian(product(r_, sigma)).values;
  return {f, g};
}

CoupledSystem3D::CoupledSystem3D(const GroundStateBundle& base) : s0_(base.at("S0")), n0_(base.at("N0")) {
  const RadialGrid& g = *s0_.grid;
  const int n = g.n;
  ops_ = density_operators_3d(g);
  SpMat a = laplacian_matrix(g) - identity(n) - diag(n0_.values);
  replace_row(a, n - 1, robin_row(g, Parity::Even));
  SpMat b = -diag(s0_.values);
  replace_row(b, n - 1, {});
  const SpMat c = -(ops_.source * diag(2.0 * s0_.values));
  matrix_ = assemble(a, b, c, ops_.density);
  lu_ = std::make_shared<SparseSolver>(matrix_);
}

std::pair<Profile, Profile> CoupledSystem3D::solve(const Vec& f, const Vec& h) const {
  const int n = s0_.size();
  if (f.size() != n || h.size() != n) throw ValidationError("CoupledSystem3D::solve: size mismatch");
  Vec b(2 * n);
  b << f, ops_.source * h;
  b[n - 1] = 0.0;
  const Vec x = lu_->solve(b);
  const double res = inf_norm(matrix_ * x - b) / std::max({inf_norm(b), inf_norm(x), 1e-300});
  if (!(res < 1e-9)) {
    std::ostringstream os;
    os << "CoupledSystem3D: linear solve residual " << res << " (operator close to singular)";
    throw SolverError(os.str());
  }
  return {make_profile(s0_.grid, x.head(n), Parity::Even),
          make_profile(s0_.grid, x.tail(n), Parity::Even, FarField::Free)};
}

std::pair<Vec, Vec> CoupledSystem3D::apply(const Profile& s, const Profile& nn, const Vec& h) const {
  Vec f = scalar_laplacian(s).values - s.values - product(n0_, s).values - product(s0_, nn).values;
  Vec g = ops_.density * nn.values - ops_.source * (2.0 * s0_.values.cwiseProduct(s.values) + h);
  return {f, g};
}

CorrectionSet solve_corrections_2d(const GroundStateBundle& base, Variant variant) {
  if (variant == Variant::Scalar2d && !base.profiles.count("R"))
    throw ValidationError("solve_corrections_2d(scalar2d): bundle has no R profile");
  if (variant == Variant::Electrostatic2d && !base.profiles.count("R1"))
    throw ValidationError("solve_corrections_2d(electrostatic2d): bundle has no R1 profile");
  const CoupledSystem2D sys(base, variant);
  const Profile& r = sys.amplitude();
  const RadialGrid& g = *r.grid;
  const Vec& xi = g.nodes;
  const int n = g.n;

  const Profile r2 = product(r, r);
  const SpMat d1 = derivative_matrix(g, 1, Parity::Even);
  const SpMat d2 = derivative_matrix(g, 2, Parity::Even);
  const SpMat lap = laplacian_matrix(g);
  const SpMat lsig = variant == Variant::Scalar2d ? lap : vector_laplacian_matrix(g);

  // a0^2-operator of the density equation applied to R^2: xi^2 f'' + 6 xi f' + 6 f
  const Vec g1 = xi.cwiseAbs2().cwiseProduct(d2 * r2.values) + 6.0 * xi.cwiseProduct(d1 * r2.values) + 6.0 * r2.values;
  const Vec f2 = -0.25 * xi.cwiseAbs2().cwiseProduct(r.values);
  const Vec f3 = lsig * (lsig * r.values);
  const Vec g3 = lap * (lap * r2.values);
  const Vec zero = Vec::Zero(n);
  const std::array<std::pair<Vec, Vec>, 3> rhs{{{zero, g1}, {f2, zero}, {f3, g3}}};

  CorrectionSet cs;
  cs.variant = variant;
  cs.base = std::make_shared<const GroundStateBundle>(base);
  for (int i = 0; i < 3; ++i) {
    const auto& [f, gg] = rhs[i];
    auto [sigma, nu] = sys.solve(f, gg);
    const auto [af, ag] = sys.apply(sigma, nu);
    const double scale = inf_norm(sigma.values) + inf_norm(nu.values);
    const std::string k = std::to_string(i + 1);
    cs.residuals["sigma" + k] = relative_residual(af, f, scale);
    cs.residuals["nu" + k] = relative_residual(ag, gg, scale);
    cs.entries.emplace("sigma" + k, std::move(sigma));
    cs.entries.emplace("nu" + k, std::move(nu));
  }

  // upsilon_1 = xi^-1 int_0^xi (2 R^2 + s (R^2)') s ds
  const Vec integrand = (2.0 * r2.values + xi.cwiseProduct(d1 * r2.values)).cwiseProduct(xi);
  const Vec ups = cumulative_integral(g, integrand, Parity::Odd).cwiseQuotient(xi);
  Profile upsilon = make_profile(r.grid, ups, Parity::Odd);
  const Vec closed = xi.cwiseProduct(r2.values);
  cs.diagnostics["upsilon1_vs_xiR2"] = inf_norm(ups - closed) / inf_norm(closed);
  cs.entries.emplace("upsilon1", std::move(upsilon));
  return cs;
}

std::vector<double> density_tail_powers(int i) {
  switch (i) {
    case 2: return {-2.0, -3.5, -4.0, -5.5};
    case 4: return {-2.0, -3.5, -6.0, -7.5};
    default: return kDensityTailPowers;
  }
}

Profile velocity_from_density(const Profile& nn, double c) {
  const RadialGrid& g = *nn.grid;
  if (g.d != 3) throw ValidationError("velocity_from_density: grid must be three-dimensional");
  if (nn.parity != Parity::Even) throw ValidationError("velocity_from_density: density must be even");
  const Vec& xi = g.nodes;
  const Vec cum = cumulative_integral(g, xi.cwiseAbs2().cwiseProduct(nn.values), Parity::Even);
  Vec v = -c * (xi.cwiseProduct(nn.values) - cum.cwiseQuotient(xi.cwiseAbs2()));
  Profile out = make_profile(nn.grid, std::move(v), Parity::Odd, FarField::Free);
  if (nn.far_field == FarField::Free && !nn.tail.empty()) {
    const double rr = g.r_max;
    double j = integrate(g, nn.values);
    for (const auto& t : nn.tail) {
      const double k = t.power;
      j -= t.coeff * std::pow(rr, k + 3.0) / (k + 3.0);
      const double coeff = -c * t.coeff * (k + 2.0) / (k + 3.0);
      if (coeff != 0.0) out.tail.push_back({coeff, k + 1.0});
    }
    out.tail.push_back({c * j, -2.0});
  }
  return out;
}

CorrectionSet solve_corrections_3d(const GroundStateBundle& base, double a0) {
  if (!(a0 > 0.0)) throw ValidationError("solve_corrections_3d: a0 must be positive");
  for (const char* k : {"S0", "N0", "V0"})
    if (!base.profiles.count(k)) throw ValidationError(std::string("solve_corrections_3d: bundle has no ") + k);
  const CoupledSystem3D sys(base);
  const Profile& s0 = base.at("S0");
  const Profile& n0 = base.at("N0");
  const RadialGrid& g = *s0.grid;
  const int n = g.n;
  const Vec zero = Vec::Zero(n);
  const SpMat lap = laplacian_matrix(g);

  // (F_i, h_i) with G_i = Delta(h_i)
  const std::array<std::pair<Vec, Vec>, 5> rhs{{
      {-0.25 * g.nodes.cwiseAbs2().cwiseProduct(s0.values), zero},
      {zero, n0.values},
      {lap * (lap * s0.values), zero},
      {zero, -(lap * n0.values)},
      {zero, -s0.values.cwiseAbs2()},
  }};

  CorrectionSet cs;
  cs.variant = Variant::ThreeD;
  cs.base = std::make_shared<const GroundStateBundle>(base);
  cs.a0 = a0;
  for (int i = 0; i < 5; ++i) {
    const auto& [f, h] = rhs[i];
    auto [s, nn] = sys.solve(f, h);
    const auto [af, ag] = sys.apply(s, nn, h);
    const double scale = inf_norm(s.values) + inf_norm(nn.values);
    const std::string k = std::to_string(i + 1);
    cs.residuals["S" + k] = relative_residual(af, f, scale);
    cs.residuals["N" + k] = relative_residual(ag, zero, scale);
    nn = with_fitted_tail(nn, density_tail_powers(i + 1));
    Profile v = velocity_from_density(nn, a0);
    cs.entries.emplace("S" + k, std::move(s));
    cs.entries.emplace("N" + k, std::move(nn));
    cs.entries.emplace("V" + k, std::move(v));
  }
  return cs;
}

}  // namespace qz
