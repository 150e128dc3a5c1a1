#include "qz/coefficients.hpp"
#include "qz/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qz;

namespace {

struct Set2D {
  GroundStateBundle base;
  CorrectionSet corr;
  CoefficientSet coeffs;
};

Set2D make_2d(Variant v, GridSpec grid) {
  Set2D s;
  s.base = v == Variant::Scalar2d ? solve_ground_state_2d(grid) : solve_vortex_ground_state(grid);
  s.corr = solve_corrections_2d(s.base, v);
  s.coeffs = v == Variant::Scalar2d ? coeffs_2d(s.base, s.corr) : coeffs_electrostatic(s.base, s.corr);
  return s;
}

const Set2D& scalar() {
  static const Set2D s = make_2d(Variant::Scalar2d, default_grid_2d());
  return s;
}

const GroundStateBundle& base_3d() {
  static const GroundStateBundle b = solve_selfsimilar_3d();
  return b;
}

const CoefficientSet& unit_3d() {
  static const CoefficientSet c = coeffs_3d(base_3d(), solve_corrections_3d(base_3d(), 1.0));
  return c;
}

void expect_references(const CoefficientSet& c, Variant v, bool skip_velocity) {
  for (const auto& ref : reference_values(v)) {
    if (skip_velocity && depends_on_velocity_scaling(ref.name)) continue;
    EXPECT_NEAR(c.at(ref.name), ref.value, ref.rel_tol * std::abs(ref.value)) << ref.name;
  }
}

}  // namespace

TEST(Coefficients2D, ScalarTable) {
  const CoefficientSet& c = scalar().coeffs;
  EXPECT_NEAR(c.at("m1"), 0.727, 0.01 * 0.727);
  EXPECT_NEAR(c.at("m2"), 0.553, 0.01 * 0.553);
  EXPECT_NEAR(c.at("m3"), 10.785, 0.01 * 10.785);
  EXPECT_EQ(c.variant, Variant::Scalar2d);
  EXPECT_FALSE(c.provenance.empty());
}

TEST(Coefficients2D, ElectrostaticTable) {
  const Set2D s = make_2d(Variant::Electrostatic2d, default_grid_2d());
  expect_references(s.coeffs, Variant::Electrostatic2d, false);
}

TEST(Coefficients2D, StableUnderLargerDomain) {
  const Set2D big = make_2d(Variant::Scalar2d, {37.5, 3750});
  for (const auto& [k, v] : scalar().coeffs.values)
    EXPECT_LT(std::abs(big.coeffs.at(k) - v) / std::abs(v), 5e-3) << k;
}

TEST(Coefficients2D, VariantMismatchIsRejected) {
  const CorrectionSet c3 = solve_corrections_3d(base_3d(), 1.0);
  EXPECT_THROW(coeffs_2d(scalar().base, c3), ValidationError);
  EXPECT_THROW(coeffs_3d(base_3d(), scalar().corr), ValidationError);
  EXPECT_THROW(scalar().coeffs.at("alpha0"), ValidationError);
}

TEST(Coefficients3D, ProjectionsAndInvariant) {
  const CoefficientSet& c = unit_3d();
  expect_references(c, Variant::ThreeD, true);
  EXPECT_LT(std::abs(c.at("beta0") / c.at("alpha0")), 1e-5);
  EXPECT_DOUBLE_EQ(c.at("m1"), c.at("beta1"));
}

TEST(Coefficients3D, AlgebraicConsistency) {
  const CoefficientSet& c = unit_3d();
  EXPECT_NEAR(c.at("m4") / c.at("m6"), -c.at("alpha0"), 1e-12 * c.at("alpha0"));
  EXPECT_NEAR(c.at("m6"), c.at("beta2") / (2.0 * c.at("alpha1")), 1e-12);
  const double N = 5.64;
  EXPECT_NEAR(-c.at("m6") * N / c.at("m4"), N / c.at("alpha0"), 1e-12);
}

TEST(Coefficients3D, UnitVelocityScalingReproducesTable) {
  // with the factor in the V_i relation set to one, the velocity-dependent entries match as well
  expect_references(unit_3d(), Variant::ThreeD, false);
}

TEST(Coefficients3D, VelocityScalingSensitivity) {
  const CoefficientSet other = coeffs_3d(base_3d(), solve_corrections_3d(base_3d(), 1.684));
  for (const auto& [k, v] : unit_3d().values) {
    if (k == "beta0") continue;
    const double change = std::abs(other.at(k) - v) / std::abs(v);
    if (depends_on_velocity_scaling(k)) EXPECT_GT(change, 1e-3) << k;
    else EXPECT_LT(change, 1e-12) << k;
  }
}

TEST(Coefficients3D, StableUnderLargerDomain) {
  const GroundStateBundle big = solve_selfsimilar_3d({31.25, 3125});
  const CoefficientSet c = coeffs_3d(big, solve_corrections_3d(big, 1.0));
  for (const auto& [k, v] : unit_3d().values) {
    if (k == "beta0") continue;
    EXPECT_LT(std::abs(c.at(k) - v) / std::abs(v), 5e-3) << k;
  }
}

TEST(Identities, TwoAndThreeDimensions) {
  for (const auto& [k, v] : identities_2d(scalar().base)) EXPECT_LT(std::abs(v), 1e-6) << k;
  for (const auto& [k, v] : identities_3d(base_3d())) EXPECT_LT(std::abs(v), 1e-5) << k;
}

TEST(ReferenceValues, Tables) {
  EXPECT_EQ(reference_values(Variant::Scalar2d).size(), 3u);
  EXPECT_EQ(reference_values(Variant::Electrostatic2d).size(), 3u);
  EXPECT_EQ(reference_values(Variant::ThreeD).size(), 16u);
  for (const auto& r : reference_values(Variant::ThreeD)) EXPECT_DOUBLE_EQ(r.rel_tol, 0.02);
  EXPECT_TRUE(depends_on_velocity_scaling("beta3"));
  EXPECT_FALSE(depends_on_velocity_scaling("alpha3"));
  EXPECT_FALSE(depends_on_velocity_scaling("m1"));
}
