#pragma once

#include "qz/cli_output.hpp"
#include "qz/lambda_dynamics.hpp"
#include "qz/simulator.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace qz::cli {

struct Pipeline {
  std::shared_ptr<const GroundStateBundle> base;
  CorrectionSet corrections;
  CoefficientSet coefficients;
};
// Ground state, corrections and coefficients for one variant. a0 only matters in 3D.
Pipeline run_pipeline(Variant v, double a0 = 1.0);
Pipeline run_pipeline(Variant v, GridSpec grid, double a0);

// Reduced parameters of E0 = c exp(-r^2), n0 = -|E0|^2, v0 = 0, by quadrature.
struct InitialDataValues {
  double c = 0.0;
  double Gamma = 0.0;
  double N = 0.0;        // int |E0|^2 xi^(d-1) dxi
  double N_tilde = 0.0;  // N - int R^2 xi dxi (2D only)
  double H = 0.0;
};
InitialDataValues initial_data_2d(double c, double Gamma, double ground_state_mass);
InitialDataValues initial_data_3d(double c, double Gamma);

extern const std::vector<std::string> kFigures;

// Runs one recipe, writes its CSV/JSON outputs into out_dir and returns the manifest.
RunManifest reproduce(const std::string& figure, const std::string& out_dir);

struct SweepSpec {
  int dim = 2;
  Variant variant = Variant::Scalar2d;  // coefficient source in 2D
  std::vector<double> gammas;
  std::vector<double> gamma_fractions;  // multiples of the 2D threshold
  std::vector<double> H;
  std::vector<double> N;                // N_tilde in 2D, N in 3D
  std::vector<double> c;                // amplitudes; H and N then come from quadrature
  double t_end = 0.0;                   // 0 picks about three periods
  bool simulate = false;
  SimConfig sim;
  int threads = 0;                      // 0 uses the hardware concurrency
};

struct SweepPoint {
  int index = 0;
  // quantities that do not apply to a point stay NaN
  double c = NAN, H = 0.0, N = 0.0, Gamma = 0.0;
  std::string status;  // "bounded", "blowup", "no bounded orbit" or "error: ..."
  double lambda_min = NAN, lambda_max = NAN;
  double period = NAN, measured_period = NAN;
  double sim_lambda_min = NAN;
  int sim_minima = 0;
};

std::vector<SweepPoint> sweep_points(const SweepSpec& spec);
RunManifest sweep(const SweepSpec& spec, const std::string& out_dir);

}  // namespace qz::cli
