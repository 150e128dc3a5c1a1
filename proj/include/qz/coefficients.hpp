#pragma once

#include "qz/corrections.hpp"

#include <map>
#include <string>
#include <vector>

namespace qz {

struct CoefficientSet {
  Variant variant = Variant::Scalar2d;
  std::map<std::string, double> values;
  std::string provenance;
  std::vector<std::string> warnings;

  double at(const std::string& name) const;
};

// m1 = 1/2 int upsilon1^2, m2 = 1/4 int xi^2 R^2, m3 = int (|Delta R|^2 + 1/2 |grad R^2|^2), all with xi dxi.
CoefficientSet coeffs_2d(const GroundStateBundle& base, const CorrectionSet& corrections);
// Same with R -> R1 and Delta^(1) in the |Delta R|^2 term.
CoefficientSet coeffs_electrostatic(const GroundStateBundle& base, const CorrectionSet& corrections);
// alpha0..alpha4, beta0..beta5 and m1..m6.
CoefficientSet coeffs_3d(const GroundStateBundle& base, const CorrectionSet& corrections);

// Integral identities satisfied by exact profiles, each returned as a relative defect.
// 2D: "virial" int(|R'|^2 - R^4/2) and "energy" int(|R'|^2 + R^2 - R^4), relative to int R^4.
std::map<std::string, double> identities_2d(const GroundStateBundle& base);
// 3D: A1, A2, A4, A5 and "mass_velocity" (int S0^2 = 1/2 int V0^2), relative to int S0^2.
std::map<std::string, double> identities_3d(const GroundStateBundle& base);

struct ReferenceValue {
  std::string name;
  double value;
  double rel_tol;
};
// Published values with their comparison tolerance (1% in 2D, 2% in 3D).
const std::vector<ReferenceValue>& reference_values(Variant v);
// True for 3D entries that involve the V_i profiles and so depend on the factor a0 in the V_i relation.
bool depends_on_velocity_scaling(const std::string& name);

}  // namespace qz
