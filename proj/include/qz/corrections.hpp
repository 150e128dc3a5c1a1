#pragma once

#include "qz/ground_states.hpp"

#include <map>
#include <memory>
#include <string>

namespace qz {

enum class Variant { Scalar2d, Electrostatic2d, ThreeD };
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct CorrectionSet {
  Variant variant = Variant::Scalar2d;
  // sigma1..3, nu1..3, upsilon1 in 2D; S1..S5, N1..N5, V1..V5 in 3D
  std::map<std::string, Profile> entries;
  std::map<std::string, double> residuals;
  std::map<std::string, double> diagnostics;
  std::shared_ptr<const GroundStateBundle> base;
  double a0 = 0.0;  // factor multiplying the V_i relation (3D only)

  const Profile& at(const std::string& name) const;
};

// Block system for the 2D pair (sigma, nu):
//   L sigma - sigma + R^2 sigma - R nu = F,   -Delta nu - 2 Delta(R sigma) = G,
// L = Delta (scalar2d) or Delta^(1) (electrostatic2d); Robin row for sigma, nu(r_max) = 0.
class CoupledSystem2D {
 public:
  CoupledSystem2D(const GroundStateBundle& base, Variant variant);
  std::pair<Profile, Profile> solve(const Vec& f, const Vec& g) const;
  // Independent evaluation of the interior equations with radial_core profile operators.
  std::pair<Vec, Vec> apply(const Profile& sigma, const Profile& nu) const;
  const SpMat& matrix() const { return matrix_; }
  const Profile& amplitude() const { return r_; }
  Parity sigma_parity() const { return sigma_parity_; }

 private:
  Variant variant_;
  Profile r_;
  Parity sigma_parity_;
  SpMat matrix_;
  std::shared_ptr<SparseSolver> lu_;
};

// Block system for (S_i, N_i) in 3D:
//   Delta S - S - N0 S - S0 N = F,   xi N' + 7/2 N - source(2 S0 S) = source(h),
// which is the once-integrated form of L(N) - 2 Delta(S0 S) = Delta(h).
class CoupledSystem3D {
 public:
  explicit CoupledSystem3D(const GroundStateBundle& base);
  std::pair<Profile, Profile> solve(const Vec& f, const Vec& h) const;
  std::pair<Vec, Vec> apply(const Profile& s, const Profile& n, const Vec& h) const;
  const SpMat& matrix() const { return matrix_; }

 private:
  Profile s0_, n0_;
  DensityOperators3D ops_;
  SpMat matrix_;
  std::shared_ptr<SparseSolver> lu_;
};

CorrectionSet solve_corrections_2d(const GroundStateBundle& base, Variant variant);
// V_i = -a0 (xi N_i - xi^-2 int_0^xi s^2 N_i ds), the regular solution of xi^-2 (xi^2 V_i)' = -a0 (2 N_i + xi N_i').
CorrectionSet solve_corrections_3d(const GroundStateBundle& base, double a0);

// Far-field powers of N_1..N_5.
std::vector<double> density_tail_powers(int i);
// Regular solution of xi^-2 (xi^2 V)' = -c (2 N + xi N'), including its algebraic tail.
Profile velocity_from_density(const Profile& n, double c);

}  // namespace qz
