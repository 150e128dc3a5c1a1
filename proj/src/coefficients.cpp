#include "qz/coefficients.hpp"

#include "qz/errors.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace qz {

double CoefficientSet::at(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw ValidationError("coefficient set has no value " + name);
  return it->second;
}

namespace {

std::string describe(const RadialGrid& g) {
  std::ostringstream os;
  os << "d=" << g.d << " r_max=" << g.r_max << " n=" << g.n;
  return os.str();
}

double wint(const Profile& p, CoefficientSet& cs) { return weighted_integral(p, &cs.warnings); }

void check_finite(const CoefficientSet& cs) {
  for (const auto& [k, v] : cs.values)
    if (!std::isfinite(v)) throw SolverError("coefficient " + k + " is not finite");
}

CoefficientSet coeffs_2d_common(const GroundStateBundle& base, const CorrectionSet& corr, Variant v,
                                const char* name) {
  if (corr.variant != v) {
    throw ValidationError(std::string(name) + ": correction set variant is " + to_string(corr.variant) +
                          ", expected " + to_string(v));
  }
  const Profile& r = base.at(v == Variant::Scalar2d ? "R" : "R1");
  CoefficientSet cs;
  cs.variant = v;
  cs.provenance = base.problem + " " + describe(*r.grid);
  const Profile& ups = corr.at("upsilon1");
  const Profile xi = sample(r.grid, [](double x) { return x; }, Parity::Odd);
  const Profile r2 = product(r, r);
  const Profile lap_r = v == Variant::Scalar2d ? scalar_laplacian(r) : vector_radial_laplacian(r);
  const Profile grad_r2 = derivative(r2);
  cs.values["m1"] = 0.5 * wint(product(ups, ups), cs);
  cs.values["m2"] = 0.25 * wint(product(product(xi, xi), r2), cs);
  cs.values["m3"] = wint(product(lap_r, lap_r), cs) + 0.5 * wint(product(grad_r2, grad_r2), cs);
  check_finite(cs);
  return cs;
}

}  // namespace

CoefficientSet coeffs_2d(const GroundStateBundle& base, const CorrectionSet& corrections) {
  return coeffs_2d_common(base, corrections, Variant::Scalar2d, "coeffs_2d");
}

CoefficientSet coeffs_electrostatic(const GroundStateBundle& base, const CorrectionSet& corrections) {
  return coeffs_2d_common(base, corrections, Variant::Electrostatic2d, "coeffs_electrostatic");
}

CoefficientSet coeffs_3d(const GroundStateBundle& base, const CorrectionSet& corr) {
  if (corr.variant != Variant::ThreeD)
    throw ValidationError("coeffs_3d: correction set variant is " + to_string(corr.variant) + ", expected threeD");
  const Profile& s0 = base.at("S0");
  const Profile& n0 = base.at("N0");
  const Profile& v0 = base.at("V0");
  CoefficientSet cs;
  cs.variant = Variant::ThreeD;
  {
    std::ostringstream os;
    os << base.problem << " " << describe(*s0.grid) << " a0=" << corr.a0;
    cs.provenance = os.str();
  }
  auto s = [&](int i) -> const Profile& { return corr.at("S" + std::to_string(i)); };
  auto vv = [&](int i) -> const Profile& { return corr.at("V" + std::to_string(i)); };
  const Profile xi = sample(s0.grid, [](double x) { return x; }, Parity::Odd);
  const Profile xi2s02 = product(product(xi, xi), product(s0, s0));
  const Profile ds0 = derivative(s0);
  const Profile dn0 = derivative(n0);

  double alpha[5];
  alpha[0] = wint(product(s0, s0), cs);
  for (int i = 1; i <= 4; ++i) alpha[i] = wint(product(s0, s(i)), cs);
  auto s0si = [&](int i) { return wint(product(s0, s(i)), cs); };
  auto v0vi = [&](int i) { return wint(product(v0, vv(i)), cs); };

  double beta[6];
  beta[0] = wint(product(ds0, ds0), cs) + wint(product(n0, product(s0, s0)), cs) + 0.5 * wint(product(v0, v0), cs);
  beta[1] = 0.25 * wint(xi2s02, cs);
  beta[2] = 0.25 * wint(xi2s02, cs) - 2.0 * s0si(1) + v0vi(1);
  beta[3] = -2.0 * s0si(2) + v0vi(2) + 0.5 * wint(product(n0, n0), cs);
  beta[4] = -2.0 * s0si(3) + v0vi(3);
  beta[5] = -2.0 * s0si(4) + v0vi(4) + 0.5 * wint(product(dn0, dn0), cs);

  for (int i = 0; i <= 4; ++i) cs.values["alpha" + std::to_string(i)] = alpha[i];
  for (int i = 0; i <= 5; ++i) cs.values["beta" + std::to_string(i)] = beta[i];
  const double q = beta[2] / alpha[1];
  cs.values["m1"] = beta[1];
  cs.values["m2"] = beta[3] - alpha[2] * q;
  cs.values["m3"] = beta[4] - alpha[3] * q;
  cs.values["m4"] = -alpha[0] * q / 2.0;
  cs.values["m5"] = beta[5] - alpha[4] * q;
  cs.values["m6"] = q / 2.0;
  check_finite(cs);
  return cs;
}

std::map<std::string, double> identities_2d(const GroundStateBundle& base) {
  const Profile& r = base.at("R");
  const Profile dr = derivative(r);
  const Profile r2 = product(r, r);
  const double grad = weighted_integral(product(dr, dr));
  const double mass = weighted_integral(r2);
  const double quartic = weighted_integral(product(r2, r2));
  return {{"virial", (grad - 0.5 * quartic) / quartic}, {"energy", (grad + mass - quartic) / quartic}};
}

std::map<std::string, double> identities_3d(const GroundStateBundle& base) {
  const Profile& s0 = base.at("S0");
  const Profile& n0 = base.at("N0");
  const Profile& v0 = base.at("V0");
  const Profile s02 = product(s0, s0);
  const Profile ds0 = derivative(s0);
  const Profile xi = sample(s0.grid, [](double x) { return x; }, Parity::Odd);
  const double grad = weighted_integral(product(ds0, ds0));
  const double ns2 = weighted_integral(product(n0, s02));
  const double mass = weighted_integral(s02);
  const double xnps2 = weighted_integral(product(product(xi, derivative(n0)), s02));
  const double v2 = weighted_integral(product(v0, v0));
  const double vds2 = weighted_integral(product(v0, derivative(s02)));
  return {
      {"A1", (grad + ns2 + mass) / mass},
      {"A2", (grad + 3.0 * ns2 + 3.0 * mass + xnps2) / mass},
      {"A4", (2.0 * mass + vds2) / mass},
      {"A5", (v2 + vds2) / mass},
      {"mass_velocity", (mass - 0.5 * v2) / mass},
  };
}

const std::vector<ReferenceValue>& reference_values(Variant v) {
  static const std::vector<ReferenceValue> scalar{{"m1", 0.727, 0.01}, {"m2", 0.553, 0.01}, {"m3", 10.785, 0.01}};
  static const std::vector<ReferenceValue> electro{{"m1", 24.42, 0.01}, {"m2", 8.14, 0.01}, {"m3", 24.94, 0.01}};
  static const std::vector<ReferenceValue> three{
      {"alpha0", 1.99, 0.02},  {"alpha1", 1.94, 0.02}, {"alpha2", 0.35, 0.02}, {"alpha3", 51.36, 0.02},
      {"alpha4", 34.44, 0.02}, {"beta1", 1.17, 0.02},  {"beta2", -1.17, 0.02}, {"beta3", 3.10, 0.02},
      {"beta4", -5.56, 0.02},  {"beta5", -2.81, 0.02}, {"m1", 1.17, 0.02},     {"m2", 3.31, 0.02},
      {"m3", 25.41, 0.02},     {"m4", 0.60, 0.02},     {"m5", 17.95, 0.02},    {"m6", -0.30, 0.02}};
  switch (v) {
    case Variant::Scalar2d: return scalar;
    case Variant::Electrostatic2d: return electro;
    case Variant::ThreeD: return three;
  }
  return scalar;
}

bool depends_on_velocity_scaling(const std::string& name) {
  static const std::set<std::string> affected{"beta2", "beta3", "beta4", "beta5", "m2",
                                              "m3",    "m4",    "m5",    "m6"};
  return affected.count(name) > 0;
}

}  // namespace qz
