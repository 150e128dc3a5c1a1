#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace qz {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<double>;
using CSpMat = Eigen::SparseMatrix<std::complex<double>>;

enum class Parity { Even, Odd };
enum class FarField { Decaying, Free };

inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }
inline Parity operator*(Parity a, Parity b) { return a == b ? Parity::Even : Parity::Odd; }
std::string to_string(Parity p);

// Far-field expansion f(xi) ~ sum c * xi^p, used beyond r_max for fields with algebraic decay.
struct PowerTerm {
  double coeff = 0.0;
  double power = 0.0;
};
using TailSeries = std::vector<PowerTerm>;

// Cell-centred radial grid: nodes xi_i = (i + 1/2) h, h = r_max / n.
// weights[i] integrates f(xi) xi^(d-1) for smooth even f (midpoint rule with
// Euler-Maclaurin corrections at both ends).
struct RadialGrid {
  int d = 2;
  double r_max = 0.0;
  int n = 0;
  double h = 0.0;
  Vec nodes;
  Vec weights;
};
using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int d, double r_max, int n);

struct Profile {
  GridPtr grid;
  Vec values;
  Parity parity = Parity::Even;
  FarField far_field = FarField::Decaying;
  TailSeries tail;

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values[i]; }
};

Profile make_profile(GridPtr grid, Vec values, Parity parity,
                     FarField far_field = FarField::Decaying, TailSeries tail = {});
Profile sample(GridPtr grid, const std::function<double(double)>& f, Parity parity,
               FarField far_field = FarField::Decaying);

// Finite-difference weights (Fornberg) for derivatives 0..m at z from nodes x.
// Result is (m+1) x x.size(), row k holds the weights of the k-th derivative.
Eigen::MatrixXd fd_weights(double z, const std::vector<double>& x, int m);

// Fourth-order first / second derivative matrices. Near the origin ghosts are
// mirrored with the given parity, near r_max one-sided six-point stencils are used.
SpMat derivative_matrix(const RadialGrid& g, int order, Parity parity);
// Delta_r = d^2 + (d-1)/xi d, on even functions.
SpMat laplacian_matrix(const RadialGrid& g);
// Delta^(1) = d^2 + (d-1)/xi d - (d-1)/xi^2, on odd functions (assembled as xi Delta_(d+2) xi^-1).
SpMat vector_laplacian_matrix(const RadialGrid& g);
SpMat diag(const Vec& v);
SpMat identity(int n);
void replace_row(SpMat& a, int row, const std::vector<std::pair<int, double>>& entries);
std::vector<std::pair<int, double>> row_entries(const SpMat& a, int row);

// Weights e such that f(0) ~ e . f for an even function (cubic in xi^2 through the first four nodes).
Vec origin_extrapolation(const RadialGrid& g);
double origin_value(const Profile& p);
// Value and slope at xi = 0 from a cubic fit through the first four nodes, no parity assumed.
std::pair<double, double> origin_jet(const Profile& p);

Profile derivative(const Profile& p);
Profile scalar_laplacian(const Profile& p);
Profile vector_radial_laplacian(const Profile& p);
Profile product(const Profile& a, const Profile& b);
Profile scaled(const Profile& a, double s);
Profile sum(const Profile& a, const Profile& b, double sb = 1.0);
Profile with_values(const Profile& like, Vec values);

TailSeries tail_product(const TailSeries& a, const TailSeries& b);
TailSeries tail_derivative(const TailSeries& a);
TailSeries tail_scaled(const TailSeries& a, double s);
double tail_eval(const TailSeries& a, double xi);
// Integral of the tail times xi^(d-1) from r to infinity.
double tail_integral(const TailSeries& t, double r, int d);
// Least-squares fit of the given powers on xi >= from_fraction * r_max.
TailSeries fit_tail(const Profile& p, const std::vector<double>& powers, double from_fraction = 0.8);
Profile with_fitted_tail(Profile p, const std::vector<double>& powers);

double integrate(const RadialGrid& g, const Vec& f);
// Integral of p xi^(d-1) over [0, r_max] plus the analytic tail beyond r_max for Free fields.
// A Decaying field with |p(r_max)| r_max^(d-1) above tail_tolerance appends a message to warnings.
double weighted_integral(const Profile& p, std::vector<std::string>* warnings = nullptr,
                         double tail_tolerance = 1e-8);
// I_i = int_0^{xi_i} f(s) ds, fourth order, f extended across the origin with its parity.
Vec cumulative_integral(const RadialGrid& g, const Vec& f, Parity parity);

struct LinearRadialOperator {
  GridPtr grid;
  SpMat matrix;
  Parity solution_parity = Parity::Even;
  // Rows whose right-hand side is replaced by a fixed boundary value.
  std::vector<std::pair<int, double>> boundary_rows;
  std::string name;

  int bandwidth() const;
};

LinearRadialOperator make_operator(GridPtr grid, SpMat m, Parity solution_parity, std::string name);
LinearRadialOperator scalar_laplacian_operator(GridPtr grid);
LinearRadialOperator identity_operator(GridPtr grid, Parity parity = Parity::Even);
// Replace the last row by  a p'(r) + b p(r) = value.
LinearRadialOperator with_outer_row(LinearRadialOperator op, double a, double b, double value);
inline LinearRadialOperator with_dirichlet(LinearRadialOperator op, double value = 0.0) {
  return with_outer_row(std::move(op), 0.0, 1.0, value);
}
inline LinearRadialOperator with_neumann(LinearRadialOperator op, double value = 0.0) {
  return with_outer_row(std::move(op), 1.0, 0.0, value);
}
inline LinearRadialOperator with_robin(LinearRadialOperator op, double kappa = 1.0) {
  return with_outer_row(std::move(op), 1.0, kappa, 0.0);
}

struct BvpReport {
  double relative_residual = 0.0;
  double condition_estimate = 0.0;
};
Profile solve_linear_bvp(const LinearRadialOperator& op, const Profile& rhs, BvpReport* report = nullptr);

// Sparse LU with failure checks; throws SolverError on a singular factorisation.
class SparseSolver {
 public:
  explicit SparseSolver(const SpMat& a);
  Vec solve(const Vec& b) const;
  // Power-iteration lower bound on ||A^-1||_2 times ||A||_inf.
  double condition_estimate(int iterations = 8) const;

 private:
  SpMat a_;
  std::shared_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
};

// Inverse iteration on A^T A; returns an estimate of the smallest singular value.
double smallest_singular_value(const SpMat& a, int iterations = 30);

void write_profile_csv(const std::string& path, const Profile& p);
void write_complex_csv(const std::string& path, const RadialGrid& g, const CVec& values);
Profile read_profile_csv(const std::string& path, int d, Parity parity);

}  // namespace qz
