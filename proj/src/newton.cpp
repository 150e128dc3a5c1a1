#include "qz/newton.hpp"

#include <cmath>

namespace qz {

NewtonResult newton_solve(const std::function<Vec(const Vec&)>& residual,
                          const std::function<SpMat(const Vec&)>& jacobian, Vec x0,
                          const NewtonOptions& opt) {
  NewtonResult r;
  r.x = std::move(x0);
  Vec f = residual(r.x);
  double norm = f.cwiseAbs().maxCoeff();
  const double target = opt.tolerance * opt.scale;
  for (int it = 0; it < opt.max_iterations; ++it) {
    r.iterations = it;
    if (norm <= target) {
      r.converged = true;
      break;
    }
    const SparseSolver lu(jacobian(r.x));
    const Vec dx = lu.solve(-f);
    double lambda = 1.0;
    Vec trial;
    Vec ftrial;
    double ntrial = 0.0;
    while (true) {
      trial = r.x + lambda * dx;
      ftrial = residual(trial);
      ntrial = ftrial.allFinite() ? ftrial.cwiseAbs().maxCoeff() : INFINITY;
      if (ntrial < (1.0 - 1e-4 * lambda) * norm || lambda <= opt.min_damping) break;
      lambda *= 0.5;
    }
    const double step = lambda * dx.cwiseAbs().maxCoeff();
    const double size = std::max(1.0, r.x.cwiseAbs().maxCoeff());
    if (!(ntrial < norm)) {
      // No decrease at all: accept only if we are already at round-off level.
      r.converged = step <= 1e-12 * size && norm <= 1e3 * target;
      break;
    }
    r.x = std::move(trial);
    f = std::move(ftrial);
    norm = ntrial;
    if (lambda == 1.0 && step <= 1e-13 * size) {
      r.converged = norm <= 1e3 * target;
      r.iterations = it + 1;
      break;
    }
  }
  r.residual = norm;
  if (!r.converged && norm <= target) r.converged = true;
  return r;
}

}  // namespace qz
