#pragma once

#include "qz/radial.hpp"

#include <functional>

namespace qz {

struct NewtonOptions {
  double tolerance = 1e-10;  // on max |F|, relative to scale
  double scale = 1.0;
  int max_iterations = 60;
  double min_damping = 1.0 / 1024.0;
};

struct NewtonResult {
  Vec x;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Damped Newton with backtracking on max |F|. Converges when max|F| <= tolerance * scale,
// or when a full step leaves the iterate unchanged to round-off.
NewtonResult newton_solve(const std::function<Vec(const Vec&)>& residual,
                          const std::function<SpMat(const Vec&)>& jacobian, Vec x0,
                          const NewtonOptions& opt = {});

}  // namespace qz
