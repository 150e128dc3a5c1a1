#include "qz/corrections.hpp"
#include "qz/errors.hpp"

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
const CorrectionSet& scalar_set() {
  static const CorrectionSet c = solve_corrections_2d(ground_state(), Variant::Scalar2d);
  return c;
}
const CorrectionSet& set_3d() {
  static const CorrectionSet c = solve_corrections_3d(selfsimilar_3d(), 1.0);
  return c;
}

double inf(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Variant, RoundTripAndRejectsUnknown) {
  for (Variant v : {Variant::Scalar2d, Variant::Electrostatic2d, Variant::ThreeD})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("quartic"), ValidationError);
}

TEST(Corrections2D, ResidualsAndParities) {
  const CorrectionSet& cs = scalar_set();
  for (const auto& [name, r] : cs.residuals) EXPECT_LT(r, 1e-8) << name;
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(cs.at("sigma" + std::to_string(i)).parity, Parity::Even);
    EXPECT_EQ(cs.at("nu" + std::to_string(i)).parity, Parity::Even);
    // nu decays: Dirichlet row at r_max
    EXPECT_NEAR(cs.at("nu" + std::to_string(i)).values.tail(1)[0], 0.0, 1e-10);
  }
  EXPECT_EQ(cs.at("upsilon1").parity, Parity::Odd);
  EXPECT_NEAR(origin_jet(cs.at("upsilon1")).first, 0.0, 1e-6);
}

TEST(Corrections2D, UpsilonHasClosedForm) {
  // xi^-1 int (2R^2 + s (R^2)') s ds = xi R^2
  EXPECT_LT(scalar_set().diagnostics.at("upsilon1_vs_xiR2"), 1e-6);
}

TEST(Corrections2D, UpsilonGivesFirstMass) {
  const Profile& u = scalar_set().at("upsilon1");
  EXPECT_NEAR(0.5 * integrate(*u.grid, u.values.cwiseAbs2()), 0.727, 0.01 * 0.727);
}

TEST(Corrections2D, ElectrostaticVariant) {
  const CorrectionSet cs = solve_corrections_2d(vortex(), Variant::Electrostatic2d);
  for (const auto& [name, r] : cs.residuals) EXPECT_LT(r, 1e-8) << name;
  EXPECT_EQ(cs.at("sigma1").parity, Parity::Odd);
  const Profile& u = cs.at("upsilon1");
  EXPECT_NEAR(0.5 * integrate(*u.grid, u.values.cwiseAbs2()), 24.42, 0.01 * 24.42);
}

TEST(Corrections2D, WrongBundleIsRejected) {
  EXPECT_THROW(solve_corrections_2d(vortex(), Variant::Scalar2d), ValidationError);
  EXPECT_THROW(solve_corrections_2d(ground_state(), Variant::Electrostatic2d), ValidationError);
  EXPECT_THROW(CoupledSystem2D(ground_state(), Variant::ThreeD), ValidationError);
}

TEST(CoupledSystem2D, LinearityAndIndependentResidual) {
  const CoupledSystem2D sys(ground_state(), Variant::Scalar2d);
  const RadialGrid& g = *ground_state().grid();
  const Vec f = -0.25 * g.nodes.cwiseAbs2().cwiseProduct(ground_state().at("R").values);
  const Vec zero = Vec::Zero(g.n);
  const auto [s1, n1] = sys.solve(f, zero);
  const auto [s2, n2] = sys.solve(2.0 * f, zero);
  EXPECT_LT(inf(s2.values - 2.0 * s1.values), 1e-12 * inf(s1.values));
  EXPECT_LT(inf(n2.values - 2.0 * n1.values), 1e-12 * inf(n1.values));

  const auto [af, ag] = sys.apply(s1, n1);
  const int m = g.n - 1;
  const double scale = inf(s1.values) + inf(n1.values);
  EXPECT_LT(inf((af - f).head(m)) / scale, 1e-8);
  EXPECT_LT(inf(ag.head(m)) / scale, 1e-8);
}

TEST(CoupledSystem2D, NoSpuriousKernelUnderRefinement) {
  const GroundStateBundle coarse = solve_ground_state_2d({30.0, 1500});
  const double s_coarse = smallest_singular_value(CoupledSystem2D(coarse, Variant::Scalar2d).matrix());
  const double s_fine = smallest_singular_value(CoupledSystem2D(ground_state(), Variant::Scalar2d).matrix());
  EXPECT_GT(s_coarse, 1e-3);
  EXPECT_GT(s_fine, 1e-3);
  EXPECT_GT(s_fine / s_coarse, 0.5);
}

TEST(Corrections3D, ResidualsAndFifthIndex) {
  const CorrectionSet& cs = set_3d();
  for (const auto& [name, r] : cs.residuals) EXPECT_LT(r, 1e-8) << name;
  const Vec s5 = cs.at("S5").values - 0.5 * selfsimilar_3d().at("S0").values;
  EXPECT_LT(inf(s5), 1e-8);
  EXPECT_LT(inf(cs.at("N5").values), 1e-8);
  EXPECT_LT(inf(cs.at("V5").values), 1e-8);
}

TEST(Corrections3D, FirstAndThirdProjections) {
  const CorrectionSet& cs = set_3d();
  const Profile& s0 = selfsimilar_3d().at("S0");
  EXPECT_NEAR(weighted_integral(product(s0, cs.at("S1"))), 1.94, 0.02 * 1.94);
  EXPECT_NEAR(weighted_integral(product(s0, cs.at("S3"))), 51.36, 0.02 * 51.36);
}

TEST(Corrections3D, VelocityScalesWithFactor) {
  const CorrectionSet other = solve_corrections_3d(selfsimilar_3d(), 2.0);
  for (int i = 1; i <= 4; ++i) {
    const std::string k = "V" + std::to_string(i);
    EXPECT_LT(inf(other.at(k).values - 2.0 * set_3d().at(k).values), 1e-12 * (1.0 + inf(other.at(k).values)))
        << k;
  }
  EXPECT_THROW(solve_corrections_3d(selfsimilar_3d(), 0.0), ValidationError);
}

TEST(VelocityFromDensity, GaussianClosedForm) {
  // V = -c (xi N - xi^-2 int_0^xi s^2 N ds) with N = exp(-xi^2)
  const double c = 1.5;
  double err[2];
  int k = 0;
  for (int n : {500, 1000}) {
    auto g = make_grid(3, 10.0, n);
    const Profile nn = sample(g, [](double x) { return std::exp(-x * x); }, Parity::Even);
    const Profile v = velocity_from_density(nn, c);
    EXPECT_EQ(v.parity, Parity::Odd);
    double e = 0.0;
    for (int i = 0; i < g->n; ++i) {
      const double x = g->nodes[i];
      const double cum = std::sqrt(M_PI) / 4.0 * std::erf(x) - 0.5 * x * std::exp(-x * x);
      e = std::max(e, std::abs(v.values[i] + c * (x * std::exp(-x * x) - cum / (x * x))));
    }
    err[k++] = e;
  }
  EXPECT_LT(err[1], 2e-6);
  EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
}

TEST(DensityTails, KnownPowers) {
  EXPECT_EQ(density_tail_powers(1), (std::vector<double>{-2.0, -3.5}));
  EXPECT_EQ(density_tail_powers(2).size(), 4u);
}
