#pragma once

#include "qz/functionals.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace qz {

struct SimConfig {
  int d = 2;
  double Gamma = 0.0;
  double r_max = 16.0;
  int n = 3200;
  double dt = 1e-3;
  double t_end = 5.0;
  double c = 2.85;               // E0 = c exp(-r^2), n0 = -|E0|^2, v0 = 0
  double output_every = 0.01;
  double snapshot_every = 0.0;   // 0 disables snapshots
  bool yoshida = false;          // fourth-order composition of the Strang step
  bool coupling = true;          // false drops the n|E|^2 coupling (linear checks)
  double sponge_fraction = 0.1;
  double sponge_strength = 5.0;
  double overflow_guard = 1e6;
  bool stop_when_underresolved = false;
};
void validate(const SimConfig& cfg);

// E, n on cells; v on the interior faces r = (i+1) h, i = 0..n-2 (zero flux at r = 0 and r = r_max).
struct SimState {
  double t = 0.0;
  CVec E;
  Vec n;
  Vec v;
};

struct DiagnosticsRow {
  double t, maxE, lambda_est, N, H, sponge_loss;
};

struct SimEvent {
  double t;
  std::string kind;  // "lambda_min", "lambda_max", "underresolved"
  double value;
};

struct SimDiagnostics {
  std::vector<DiagnosticsRow> rows;
  std::vector<SimEvent> events;
  double N0 = 0.0, H0 = 0.0;
  double max_N_drift = 0.0;  // relative, sponge losses added back
  double max_H_drift = 0.0;
  double sponge_loss_N = 0.0, sponge_loss_H = 0.0;
  double dt_max = 0.0;
  bool underresolved = false;
  bool stopped_early = false;
  double max_amplitude_ratio = 0.0;  // max_t max|E(t)| / max|E(0)|
  double min_lambda_est = 0.0;
  std::vector<std::string> warnings;

  int count_events(const std::string& kind) const;
};

// Conservative finite-volume discretisation of the radial scalar model:
//   i E_t = -Lap E + n E + Gamma Lap^2 E,  n_t = -Div v,  v_t = -Grad(n + |E|^2 - Gamma Lap n),
// with Lap = Div Grad. One step is Strang splitting of the linear part (Crank-Nicolson)
// and the coupling part (exact), so the discrete N is conserved and H up to O(dt^2).
class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const RadialGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const SpMat& laplacian() const { return lap_; }

  SimState initial_state() const;
  SimState from_field_state(const FieldState& f) const;
  FieldState to_field_state(const SimState& s) const;

  void step(SimState& s, double dt) const;
  void apply_sponge(SimState& s, double dt) const;

  double plasmon_number(const SimState& s) const;
  double hamiltonian(const SimState& s) const;
  // 1/2 int (v^2 + n^2 + Gamma |grad n|^2), conserved by the acoustic part when E = 0
  double acoustic_energy(const SimState& s) const;
  // e-folding half-width of |E| around its peak, in cells
  double efold_cells(const SimState& s) const;

 private:
  struct Factor;
  const Factor& factor(double dt) const;
  void linear_substep(SimState& s, double dt) const;
  void coupling_substep(SimState& s, double dt) const;
  void strang(SimState& s, double dt) const;

  SimConfig cfg_;
  GridPtr grid_;
  Vec vol_, area_;  // cell volumes, interior face areas
  SpMat grad_, div_, lap_;
  Vec sponge_cells_, sponge_faces_;
  mutable std::vector<std::pair<double, std::shared_ptr<Factor>>> factors_;
};

using SnapshotCallback = std::function<void(const Simulator&, const SimState&)>;
SimDiagnostics run(const SimConfig& cfg, const SnapshotCallback& snapshot = {});

}  // namespace qz
