#include "qz/errors.hpp"
#include "qz/lambda_dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qz;

namespace {

// Scalar 2D and unit-scaling 3D coefficients as produced by the coefficient pipeline.
CoefficientSet scalar_coeffs() {
  CoefficientSet c;
  c.variant = Variant::Scalar2d;
  c.values = {{"m1", 0.7274490671260528}, {"m2", 0.5528589653160726}, {"m3", 10.784827257147906}};
  return c;
}

CoefficientSet coeffs_3d_unit() {
  CoefficientSet c;
  c.variant = Variant::ThreeD;
  c.values = {{"alpha0", 1.988625460335504}, {"m1", 1.1688445049737326}, {"m2", 3.3528970161917337},
              {"m3", 25.423693141339385},    {"m4", 0.5991793820550874}, {"m5", 17.899324739525003},
              {"m6", -0.30130328410559465}};
  return c;
}

ReducedParams2D top(double Gamma = 5e-3) { return make_params_2d(-0.0430, 0.240, Gamma, scalar_coeffs()); }

double quadratic(const ReducedParams2D& p, double y) { return p.H * y * y + p.N_tilde * y - p.Gamma * p.m3; }

}  // namespace

TEST(Threshold2D, ValueAndEdgeCases) {
  EXPECT_NEAR(threshold_gamma(top()), 0.240 * 0.240 / (4.0 * 0.0430 * 10.784827257147906), 1e-15);
  EXPECT_NEAR(threshold_gamma(top()), 0.03105, 1e-4);
  EXPECT_EQ(threshold_gamma(make_params_2d(-0.0430, 0.0, 5e-3, scalar_coeffs())), 0.0);
  EXPECT_THROW(threshold_gamma(make_params_2d(0.01, 0.240, 5e-3, scalar_coeffs())), ValidationError);
}

TEST(TurningPoints2D, RootsOfTheQuadratic) {
  const auto [ym, yM] = turning_points(top());
  EXPECT_NEAR(ym, 0.2345, 1e-3);
  EXPECT_NEAR(yM, 5.347, 1e-3);
  EXPECT_LT(std::abs(quadratic(top(), ym)), 1e-12);
  EXPECT_LT(std::abs(quadratic(top(), yM)), 1e-12);

  const auto [z0, z1] = turning_points(top(0.0));
  EXPECT_EQ(z0, 0.0);
  EXPECT_NEAR(z1, 0.240 / 0.0430, 1e-12);
}

TEST(Integrate2D, ExtremaMatchTurningPoints) {
  const ReducedParams2D p = top();
  const LambdaTrajectory tr = integrate_lambda_2d(p, 0.0, 60.0);
  const auto [ym, yM] = turning_points(p);
  EXPECT_NEAR(tr.lambda_min, std::sqrt(ym), 1e-6);
  EXPECT_NEAR(tr.lambda_max, std::sqrt(yM), 1e-6);
  EXPECT_FALSE(tr.blowup_time.has_value());
  ASSERT_GE(tr.minima_values.size(), 2u);
}

TEST(Integrate2D, FirstIntegralOverTenPeriods) {
  const ReducedParams2D p = top();
  const double T = oscillation_period(p).value();
  const LambdaTrajectory tr = integrate_lambda_2d(p, 0.0, 10.5 * T);
  EXPECT_GE(tr.minima_times.size(), 10u);
  EXPECT_LT(tr.first_integral_residual, 1e-8);
}

TEST(Integrate2D, PeriodAgreesWithQuadrature) {
  const ReducedParams2D p = top();
  const double T = oscillation_period(p).value();
  const LambdaTrajectory tr = integrate_lambda_2d(p, 0.0, 3.5 * T);
  ASSERT_TRUE(tr.period.has_value());
  EXPECT_NEAR(*tr.period, T, 1e-3 * T);
}

TEST(Integrate2D, ClassicalCaseBlowsUpWithFiniteSlope) {
  const ReducedParams2D p = top(0.0);
  const LambdaTrajectory tr = integrate_lambda_2d(p, 0.0, 40.0);
  ASSERT_TRUE(tr.blowup_time.has_value());
  ASSERT_TRUE(tr.terminal_slope.has_value());
  // lambda_t^2 -> N_tilde / m1 as lambda -> 0
  const double expected = -std::sqrt(p.N_tilde / p.m1);
  EXPECT_NEAR(*tr.terminal_slope, expected, 1e-3 * std::abs(expected));
  EXPECT_NEAR(*tr.terminal_slope, -0.5745, 1e-3);
  EXPECT_FALSE(oscillation_period(p).has_value());
}

TEST(Integrate2D, ClassicalSwitchAfterExplicitStart) {
  // started inside the well the trajectory must still reach y = 0 instead of bouncing
  const ReducedParams2D p = make_params_2d(-0.0295, 0.168, 0.0, scalar_coeffs());
  const LambdaTrajectory tr = integrate_lambda_2d(p, 2.0, 40.0);
  ASSERT_TRUE(tr.blowup_time.has_value());
  EXPECT_LT(tr.lambda_min, 1e-3);
}

TEST(Integrate2D, RejectsStartOutsideTheWell) {
  const auto [ym, yM] = turning_points(top());
  EXPECT_THROW(integrate_lambda_2d(top(), 0.5 * ym, 10.0), ValidationError);
  EXPECT_THROW(integrate_lambda_2d(top(), 1.5 * yM, 10.0), ValidationError);
}

TEST(Evolve2D, TimeReversal) {
  const ReducedParams2D p = top();
  const double y0 = 2.0, v0 = -std::sqrt(y_radicand(p, y0));
  const auto [y1, v1] = evolve_y_2d(p, y0, v0, 7.3);
  const auto [y2, v2] = evolve_y_2d(p, y1, v1, -7.3);
  EXPECT_NEAR(y2, y0, 1e-6);
  EXPECT_NEAR(v2, v0, 1e-6);
  // the second-order form preserves the first integral
  EXPECT_NEAR(v1 * v1, y_radicand(p, y1), 1e-8);
}

TEST(Period2D, GrowsTowardsThresholdAndStopsAbove) {
  const double gc = threshold_gamma(top());
  double prev = 0.0;
  for (double f : {0.2, 0.5, 0.9, 0.99}) {
    const auto T = oscillation_period(top(f * gc));
    ASSERT_TRUE(T.has_value()) << f;
    EXPECT_GT(*T, prev) << f;
    prev = *T;
  }
  // above the threshold the quadratic has no positive part
  EXPECT_THROW(turning_points(top(1.01 * gc)), ValidationError);
}

TEST(Dynamics3D, TurningRadiiAndPeriod) {
  const ReducedParams3D p = make_params_3d(-18.97, 5.64, 2e-5, coeffs_3d_unit());
  EXPECT_NEAR(p.a0, std::sqrt(5.64 / 1.988625460335504), 1e-14);
  const auto roots = turning_radii_3d(p);
  ASSERT_GE(roots.size(), 2u);
  for (double r : roots) EXPECT_LT(std::abs(lambda_polynomial_3d(p, r)), 1e-9);

  const LambdaTrajectory tr = integrate_lambda_3d(p, 0.0, 1.0);
  EXPECT_NEAR(tr.lambda_min, 0.03032, 1e-4);
  EXPECT_NEAR(tr.lambda_max, 0.22106, 1e-4);
  EXPECT_LT(tr.first_integral_residual, 1e-8);
  const double T = oscillation_period(p).value();
  EXPECT_NEAR(T, 0.2336, 1e-3);
  ASSERT_TRUE(tr.period.has_value());
  EXPECT_NEAR(*tr.period, T, 1e-3 * T);
}

TEST(Dynamics3D, SmallerGammaGivesDeeperMinimum) {
  const double lmin_a = integrate_lambda_3d(make_params_3d(-18.97, 5.64, 2e-5, coeffs_3d_unit()), 0.0, 1.0).lambda_min;
  const double lmin_b = integrate_lambda_3d(make_params_3d(-18.97, 5.64, 1e-5, coeffs_3d_unit()), 0.0, 1.0).lambda_min;
  EXPECT_LT(lmin_b, lmin_a);
}

TEST(Dynamics3D, ClassicalBlowupExponent) {
  const ReducedParams3D p = make_params_3d(-18.97, 5.64, 0.0, coeffs_3d_unit());
  const LambdaTrajectory tr = integrate_lambda_3d(p, 0.0, 2.0);
  ASSERT_TRUE(tr.blowup_time.has_value());
  ASSERT_TRUE(tr.blowup_exponent.has_value());
  EXPECT_NEAR(*tr.blowup_exponent, 2.0 / 3.0, 0.05);
  EXPECT_FALSE(oscillation_period(p).has_value());

  // near the singularity lambda_t^2 lambda approaches a0^2
  const LambdaSample& last = tr.samples.back();
  ASSERT_LT(last.lambda, 1e-2);
  EXPECT_NEAR(last.lambda_t * last.lambda_t * last.lambda / (p.a0 * p.a0), 1.0, 0.05);
}

TEST(Dynamics3D, RejectsBadParameters) {
  EXPECT_THROW(make_params_3d(-18.97, 0.0, 2e-5, coeffs_3d_unit()), ValidationError);
  EXPECT_THROW(make_params_3d(-18.97, 5.64, -1.0, coeffs_3d_unit()), ValidationError);
  EXPECT_THROW(make_params_2d(-0.043, 0.24, 5e-3, coeffs_3d_unit()), ValidationError);
  EXPECT_THROW(make_params_3d(-18.97, 5.64, 2e-5, scalar_coeffs()), ValidationError);
}
