#pragma once

#include "qz/radial.hpp"

#include <map>
#include <string>

namespace qz {

struct SolverMeta {
  int iterations = 0;
  std::vector<double> shooting_parameters;
  std::map<std::string, double> diagnostics;
};

struct GroundStateBundle {
  std::string problem;
  std::map<std::string, Profile> profiles;
  double residual_inf = 0.0;  // max discrete residual relative to the largest amplitude
  SolverMeta meta;

  const Profile& at(const std::string& name) const;
  GridPtr grid() const { return profiles.begin()->second.grid; }
};

struct GridSpec {
  double r_max = 30.0;
  int n = 3000;
};
inline GridSpec default_grid_2d() { return {30.0, 3000}; }
inline GridSpec default_grid_3d() { return {25.0, 2500}; }

// Delta R - R + R^3 = 0, R > 0 even, R'(0) = 0, R -> 0.
GroundStateBundle solve_ground_state_2d(GridSpec spec = default_grid_2d());
// Delta^(1) R - R + R^3 = 0, R > 0 on (0, inf), R(0) = 0, R -> 0.
GroundStateBundle solve_vortex_ground_state(GridSpec spec = default_grid_2d());

struct SelfSimilar2dOptions {
  double a0_bracket_max = 0.5;
  double continuation_step = 0.02;
};
// Delta P - P - M P = 0 and a0^2 (xi^2 M'' + 6 xi M' + 6 M) - Delta M = Delta P^2, continued from (R, -R^2).
GroundStateBundle solve_selfsimilar_2d(double a0, GridSpec spec = default_grid_2d(),
                                       SelfSimilar2dOptions opt = {});

// Operators of the 3D density relation L(N) = Delta(g), L = xi^2 d^2 + 13/2 xi d + 7.
// The regular solution obeys xi N' + 7/2 N = (xi g' + g - g(0)) / xi^2, which is what is discretised:
//   density * N = source * g.
struct DensityOperators3D {
  SpMat density;
  SpMat source;
};
DensityOperators3D density_operators_3d(const RadialGrid& g);

// S0 > 0 with Delta S0 - S0 - N0 S0 = 0, L(N0) = Delta(S0^2); V0 from 5/2 V0 + xi V0' = -(S0^2)'.
GroundStateBundle solve_selfsimilar_3d(GridSpec spec = default_grid_3d());

// Far-field powers used for the algebraically decaying 3D fields.
inline const std::vector<double> kDensityTailPowers{-2.0, -3.5};
inline const std::vector<double> kVelocityTailPowers{-2.5};

}  // namespace qz
