#include "qz/coefficients.hpp"
#include "qz/errors.hpp"
#include "qz/ground_states.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qz;

namespace {

const GroundStateBundle& ground_state() {
  static const GroundStateBundle b = solve_ground_state_2d();
  return b;
}
const GroundStateBundle& vortex() {
  static const GroundStateBundle b = solve_vortex_ground_state();
  return b;
}
const GroundStateBundle& selfsimilar_3d() {
  static const GroundStateBundle b = solve_selfsimilar_3d();
  return b;
}

double mass(const Profile& p) { return integrate(*p.grid, p.values.cwiseAbs2()); }

}  // namespace

TEST(GroundState2D, ResidualAndShape) {
  const auto& b = ground_state();
  EXPECT_LT(b.residual_inf, 1e-8);
  const Vec& r = b.at("R").values;
  EXPECT_TRUE((r.array() > 0.0).all());
  for (int i = 1; i < r.size(); ++i) ASSERT_LE(r[i], r[i - 1]) << "at node " << i;
  EXPECT_EQ(b.at("R").parity, Parity::Even);
}

TEST(GroundState2D, TownesProfileValues) {
  // R(0) = 2.20620086... and int R^2 xi dxi = 1.86225... for the 2D cubic ground state
  const auto& b = ground_state();
  EXPECT_NEAR(b.meta.diagnostics.at("R(0)"), 2.2062008, 1e-6);
  EXPECT_NEAR(mass(b.at("R")), 1.862255, 2e-6);
}

TEST(GroundState2D, IntegralIdentities) {
  const auto id = identities_2d(ground_state());
  EXPECT_LT(std::abs(id.at("virial")), 1e-6);
  EXPECT_LT(std::abs(id.at("energy")), 1e-6);
}

TEST(GroundState2D, GridRefinementStable) {
  const GroundStateBundle fine = solve_ground_state_2d({30.0, 6000});
  const double m0 = mass(ground_state().at("R")), m1 = mass(fine.at("R"));
  EXPECT_LT(std::abs(m1 - m0) / m0, 1e-3);
}

TEST(GroundState2D, RejectsTinyGrid) {
  EXPECT_THROW(solve_ground_state_2d({4.0, 400}), ValidationError);
  EXPECT_THROW(solve_ground_state_2d({30.0, 10}), ValidationError);
}

TEST(VortexGroundState, MassResidualAndOrigin) {
  const auto& b = vortex();
  const Profile& r1 = b.at("R1");
  EXPECT_LT(b.residual_inf, 1e-8);
  EXPECT_EQ(r1.parity, Parity::Odd);
  EXPECT_NEAR(mass(r1), 7.69, 0.01 * 7.69);
  EXPECT_NEAR(origin_jet(r1).first, 0.0, 1e-8);
  EXPECT_TRUE((r1.values.array() > 0.0).all());
}

TEST(SelfSimilar2D, ZeroParameterIsTheGroundStateLimit) {
  const GroundStateBundle b = solve_selfsimilar_2d(0.0);
  const Vec& r = ground_state().at("R").values;
  EXPECT_LT((b.at("P").values - r).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((b.at("M").values + r.cwiseAbs2()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SelfSimilar2D, TendsToGroundStateMonotonically) {
  const Vec& r = ground_state().at("R").values;
  double prev = INFINITY;
  for (double a0 : {0.2, 0.1, 0.05}) {
    const GroundStateBundle b = solve_selfsimilar_2d(a0);
    EXPECT_LT(b.residual_inf, 1e-8) << "a0=" << a0;
    EXPECT_TRUE((b.at("P").values.array() > 0.0).all());
    const double dist = (b.at("P").values - r).cwiseAbs().maxCoeff() +
                        (b.at("M").values + r.cwiseAbs2()).cwiseAbs().maxCoeff();
    EXPECT_LT(dist, prev) << "a0=" << a0;
    prev = dist;
    EXPECT_GT(mass(b.at("P")), mass(ground_state().at("R")));
  }
}

TEST(SelfSimilar2D, RejectsParametersOutsideTheBracket) {
  EXPECT_THROW(solve_selfsimilar_2d(-0.1), ValidationError);
  EXPECT_THROW(solve_selfsimilar_2d(0.6), ValidationError);
}

TEST(SelfSimilar3D, ProfilesAndConsistency) {
  const auto& b = selfsimilar_3d();
  EXPECT_LT(b.residual_inf, 1e-8);
  EXPECT_TRUE((b.at("S0").values.array() > 0.0).all());
  EXPECT_LT(b.meta.diagnostics.at("v0_consistency"), 1e-6);
  const Profile s2 = product(b.at("S0"), b.at("S0"));
  EXPECT_NEAR(weighted_integral(s2), 1.99, 0.02 * 1.99);
}

TEST(SelfSimilar3D, IntegralIdentities) {
  for (const auto& [name, defect] : identities_3d(selfsimilar_3d())) EXPECT_LT(std::abs(defect), 1e-5) << name;
}

TEST(SelfSimilar3D, DensityOperatorsNeedThreeDimensions) {
  EXPECT_THROW(density_operators_3d(*make_grid(2, 10.0, 100)), ValidationError);
}
