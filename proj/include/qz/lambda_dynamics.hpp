#pragma once

#include "qz/coefficients.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qz {

struct ReducedParams2D {
  double H = 0.0;
  double N_tilde = 0.0;
  double Gamma = 0.0;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
};

struct ReducedParams3D {
  double H = 0.0;
  double N = 0.0;
  double Gamma = 0.0;
  double a0 = 0.0;
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0, m5 = 0.0, m6 = 0.0;
};

ReducedParams2D make_params_2d(double H, double N_tilde, double Gamma, const CoefficientSet& c);
// a0^2 = N / alpha0
ReducedParams3D make_params_3d(double H, double N, double Gamma, const CoefficientSet& c);
void validate(const ReducedParams2D& p);
void validate(const ReducedParams3D& p);

struct LambdaSample {
  double t;
  double lambda;
  double lambda_t;
};

struct LambdaTrajectory {
  std::vector<LambdaSample> samples;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::optional<double> period;       // measured from successive minima
  std::optional<double> blowup_time;  // time at which lambda reaches lambda_floor
  std::vector<double> minima_times, minima_values;
  std::vector<double> maxima_times, maxima_values;
  double first_integral_residual = 0.0;  // max |lambda-equation radicand mismatch| along the samples
  std::optional<double> terminal_slope;  // lambda_t at the blow-up event
  std::optional<double> blowup_exponent; // fitted p in lambda ~ (t* - t)^p (3D)
};

struct DynamicsOptions {
  double output_dt = 0.01;
  double tolerance = 1e-13;
  double lambda_floor = 1e-6;
  // Gamma = 0 in 2D: below this lambda the regular first-order lambda-form takes over.
  double lambda_switch = 1e-3;
};

// N_tilde^2 / (4 |H| m3)
double threshold_gamma(const ReducedParams2D& p);
// Roots 0 <= y_m < y_M of H y^2 + N_tilde y - Gamma m3.
std::pair<double, double> turning_points(const ReducedParams2D& p);
// 4 (H y^2 + N_tilde y - Gamma m3) / (m1 + m2 y), the right-hand side of y_t^2.
double y_radicand(const ReducedParams2D& p, double y);
// Second-order form y_tt = d/dy [2 (H y^2 + N_tilde y - Gamma m3) / (m1 + m2 y)].
double y_acceleration(const ReducedParams2D& p, double y);
// Advance (y, y_t) by time dt (negative dt integrates backwards).
std::pair<double, double> evolve_y_2d(const ReducedParams2D& p, double y, double y_t, double dt,
                                      double tolerance = 1e-13);

// Starts at y0 with y_t(0) = -sqrt(y_radicand(y0)); y0 <= 0 selects y_M.
LambdaTrajectory integrate_lambda_2d(const ReducedParams2D& p, double y0, double t_end,
                                     const DynamicsOptions& opt = {});

// H l^4 - m2 l^3 - m6 N l^2 - m5 Gamma l - m3 Gamma a0^2
double lambda_polynomial_3d(const ReducedParams3D& p, double lambda);
// lambda_t^2 = lambda_polynomial_3d / (lambda^2 (m1 a0^2 lambda^2 + m4 lambda))
double lambda_radicand_3d(const ReducedParams3D& p, double lambda);
// Positive roots of lambda_polynomial_3d, ascending.
std::vector<double> turning_radii_3d(const ReducedParams3D& p);

// lambda0 <= 0 selects the upper turning radius of the outermost bounded orbit.
LambdaTrajectory integrate_lambda_3d(const ReducedParams3D& p, double lambda0, double t_end,
                                     const DynamicsOptions& opt = {});

// 2 int dy / |y_t| between the turning points; empty for Gamma = 0 (blow-up).
std::optional<double> oscillation_period(const ReducedParams2D& p);
std::optional<double> oscillation_period(const ReducedParams3D& p, double lambda0 = 0.0);

}  // namespace qz
