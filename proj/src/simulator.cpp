#include "qz/simulator.hpp"

#include "qz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qz {

using cplx = std::complex<double>;

int SimDiagnostics::count_events(const std::string& kind) const {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [&](const SimEvent& e) { return e.kind == kind; }));
}

void validate(const SimConfig& c) {
  if (c.d != 2 && c.d != 3) throw ValidationError("simulate: d must be 2 or 3");
  if (!(c.Gamma >= 0.0)) throw ValidationError("simulate: Gamma must be nonnegative");
  if (!(c.r_max > 0.0) || c.n < 32) throw ValidationError("simulate: need r_max > 0 and at least 32 cells");
  if (!(c.dt > 0.0)) throw ValidationError("simulate: dt must be positive");
  if (!(c.t_end >= 0.0)) throw ValidationError("simulate: t_end must be nonnegative");
  if (!(c.output_every > 0.0)) throw ValidationError("simulate: output cadence must be positive");
  if (!(c.sponge_fraction >= 0.0 && c.sponge_fraction < 0.5)) throw ValidationError("simulate: sponge fraction must lie in [0, 0.5)");
  if (!(c.sponge_strength >= 0.0)) throw ValidationError("simulate: sponge strength must be nonnegative");
}

struct Simulator::Factor {
  double dt = 0.0;
  Eigen::SparseLU<CSpMat, Eigen::COLAMDOrdering<int>> lu_e;
  CSpMat explicit_e;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_n;
  SpMat lap_m;  // Lap (I - Gamma Lap)
  SpMat grad_m; // Grad (I - Gamma Lap)
};

Simulator::Simulator(SimConfig cfg) : cfg_(cfg) {
  validate(cfg_);
  grid_ = make_grid(cfg_.d, cfg_.r_max, cfg_.n);
  const int n = cfg_.n, d = cfg_.d;
  const double h = grid_->h;
  vol_.resize(n);
  for (int i = 0; i < n; ++i) vol_[i] = (std::pow((i + 1.0) * h, d) - std::pow(i * h, d)) / d;
  area_.resize(n - 1);
  for (int f = 0; f < n - 1; ++f) area_[f] = std::pow((f + 1.0) * h, d - 1);

  std::vector<Eigen::Triplet<double>> tg, td;
  for (int f = 0; f < n - 1; ++f) {
    tg.emplace_back(f, f, -1.0 / h);
    tg.emplace_back(f, f + 1, 1.0 / h);
  }
  for (int i = 0; i < n; ++i) {
    if (i <= n - 2) td.emplace_back(i, i, area_[i] / vol_[i]);
    if (i >= 1) td.emplace_back(i, i - 1, -area_[i - 1] / vol_[i]);
  }
  grad_.resize(n - 1, n);
  grad_.setFromTriplets(tg.begin(), tg.end());
  div_.resize(n, n - 1);
  div_.setFromTriplets(td.begin(), td.end());
  lap_ = div_ * grad_;
  lap_.makeCompressed();

  // sin^2 ramp over the outer sponge_fraction of the domain
  const double rs = (1.0 - cfg_.sponge_fraction) * cfg_.r_max;
  auto sigma = [&](double r) {
    if (cfg_.sponge_fraction <= 0.0 || r <= rs) return 0.0;
    const double s = std::sin(0.5 * M_PI * (r - rs) / (cfg_.r_max - rs));
    return cfg_.sponge_strength * s * s;
  };
  sponge_cells_.resize(n);
  for (int i = 0; i < n; ++i) sponge_cells_[i] = sigma(grid_->nodes[i]);
  sponge_faces_.resize(n - 1);
  for (int f = 0; f < n - 1; ++f) sponge_faces_[f] = sigma((f + 1.0) * h);
}

const Simulator::Factor& Simulator::factor(double dt) const {
  for (const auto& [key, f] : factors_)
    if (key == dt) return *f;
  const int n = cfg_.n;
  auto f = std::make_shared<Factor>();
  f->dt = dt;
  const SpMat id = identity(n);
  const SpMat k = -lap_ + cfg_.Gamma * (lap_ * lap_);
  const CSpMat kc = k.cast<cplx>();
  const CSpMat idc = id.cast<cplx>();
  const cplx half_i(0.0, 0.5 * dt);
  CSpMat implicit_e = idc + half_i * kc;
  f->explicit_e = idc - half_i * kc;
  implicit_e.makeCompressed();
  f->lu_e.compute(implicit_e);
  if (f->lu_e.info() != Eigen::Success) throw SolverError("simulator: factorisation of the Schroedinger step failed");
  const SpMat m = id - cfg_.Gamma * lap_;
  f->lap_m = lap_ * m;
  f->grad_m = grad_ * m;
  SpMat a = id - 0.25 * dt * dt * f->lap_m;
  a.makeCompressed();
  f->lu_n.compute(a);
  if (f->lu_n.info() != Eigen::Success) throw SolverError("simulator: factorisation of the acoustic step failed");
  factors_.emplace_back(dt, f);
  return *f;
}

SimState Simulator::initial_state() const {
  const FieldState f = gaussian_state(grid_, cfg_.c, cfg_.Gamma);
  SimState s;
  s.E = f.E;
  s.n = f.n;
  s.v = Vec::Zero(cfg_.n - 1);
  return s;
}

SimState Simulator::from_field_state(const FieldState& f) const {
  if (f.grid->n != cfg_.n || std::abs(f.grid->r_max - cfg_.r_max) > 1e-12 * cfg_.r_max || f.grid->d != cfg_.d)
    throw ValidationError("from_field_state: field grid does not match the simulator grid");
  SimState s;
  s.E = f.E;
  s.n = f.n;
  s.v.resize(cfg_.n - 1);
  for (int k = 0; k < cfg_.n - 1; ++k) s.v[k] = 0.5 * (f.v[k] + f.v[k + 1]);
  return s;
}

FieldState Simulator::to_field_state(const SimState& s) const {
  const int n = cfg_.n;
  Vec vc(n);
  for (int i = 0; i < n; ++i) {
    const double inner = i >= 1 ? s.v[i - 1] : 0.0;
    const double outer = i <= n - 2 ? s.v[i] : 0.0;
    vc[i] = 0.5 * (inner + outer);
  }
  return make_field_state(grid_, s.E, s.n, vc, cfg_.Gamma);
}

void Simulator::linear_substep(SimState& s, double dt) const {
  const Factor& f = factor(dt);
  s.E = f.lu_e.solve(f.explicit_e * s.E);
  const Vec rhs = s.n - dt * (div_ * s.v) + 0.25 * dt * dt * (f.lap_m * s.n);
  const Vec n_new = f.lu_n.solve(rhs);
  s.v -= 0.5 * dt * (f.grad_m * (s.n + n_new));
  s.n = n_new;
}

void Simulator::coupling_substep(SimState& s, double dt) const {
  if (!cfg_.coupling) return;
  for (int i = 0; i < cfg_.n; ++i) s.E[i] *= std::polar(1.0, -s.n[i] * dt);
  s.v -= dt * (grad_ * s.E.cwiseAbs2());
}

void Simulator::strang(SimState& s, double dt) const {
  coupling_substep(s, 0.5 * dt);
  linear_substep(s, dt);
  coupling_substep(s, 0.5 * dt);
}

void Simulator::step(SimState& s, double dt) const {
  if (dt == 0.0) return;
  if (cfg_.yoshida) {
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double w0 = 1.0 - 2.0 * w1;
    strang(s, w1 * dt);
    strang(s, w0 * dt);
    strang(s, w1 * dt);
  } else {
    strang(s, dt);
  }
  s.t += dt;
  const double peak = s.E.cwiseAbs().maxCoeff();
  if (!std::isfinite(peak) || peak > cfg_.overflow_guard || !s.n.allFinite()) {
    std::ostringstream os;
    os << "simulator: instability detected at t = " << s.t << " (max|E| = " << peak << ")";
    throw SolverError(os.str());
  }
}

void Simulator::apply_sponge(SimState& s, double dt) const {
  if (cfg_.sponge_fraction <= 0.0 || cfg_.sponge_strength <= 0.0) return;
  const Vec dc = (-dt * sponge_cells_).array().exp().matrix();
  const Vec df = (-dt * sponge_faces_).array().exp().matrix();
  s.E = s.E.cwiseProduct(dc.cast<cplx>());
  s.n = s.n.cwiseProduct(dc);
  s.v = s.v.cwiseProduct(df);
}

double Simulator::plasmon_number(const SimState& s) const { return vol_.dot(s.E.cwiseAbs2()); }

double Simulator::hamiltonian(const SimState& s) const {
  const double h = grid_->h;
  const Vec wf = area_ * h;
  const CVec ge = grad_.cast<cplx>() * s.E;
  const Vec e2 = s.E.cwiseAbs2();
  double out = wf.dot(ge.cwiseAbs2());
  out += vol_.dot(s.n.cwiseProduct(e2) + 0.5 * s.n.cwiseAbs2());
  out += 0.5 * wf.dot(s.v.cwiseAbs2());
  if (cfg_.Gamma != 0.0) {
    const CVec le = lap_.cast<cplx>() * s.E;
    const Vec gn = grad_ * s.n;
    out += cfg_.Gamma * (vol_.dot(le.cwiseAbs2()) + 0.5 * wf.dot(gn.cwiseAbs2()));
  }
  return out;
}

double Simulator::acoustic_energy(const SimState& s) const {
  const Vec wf = area_ * grid_->h;
  const Vec gn = grad_ * s.n;
  return 0.5 * (wf.dot(s.v.cwiseAbs2()) + vol_.dot(s.n.cwiseAbs2()) + cfg_.Gamma * wf.dot(gn.cwiseAbs2()));
}

double Simulator::efold_cells(const SimState& s) const {
  const Vec a = s.E.cwiseAbs();
  Eigen::Index p = 0;
  const double peak = a.maxCoeff(&p);
  if (peak == 0.0) return INFINITY;
  const double thr = peak / M_E;
  auto crossing = [&](int dir) {
    for (int i = static_cast<int>(p) + dir; i >= 0 && i < cfg_.n; i += dir) {
      if (a[i] < thr) {
        const double frac = (a[i - dir] - thr) / (a[i - dir] - a[i]);
        return static_cast<double>(std::abs(i - dir - p)) + frac;
      }
    }
    return static_cast<double>(INFINITY);
  };
  // towards the axis the profile continues by symmetry
  return std::min(crossing(+1), p > 0 ? crossing(-1) : static_cast<double>(INFINITY));
}

SimDiagnostics run(const SimConfig& cfg, const SnapshotCallback& snapshot) {
  const Simulator sim(cfg);
  SimState s = sim.initial_state();
  SimDiagnostics dg;
  dg.N0 = sim.plasmon_number(s);
  dg.H0 = sim.hamiltonian(s);
  const double peak0 = s.E.cwiseAbs().maxCoeff();
  if (!(peak0 > 0.0)) throw ValidationError("simulate: initial amplitude must be nonzero");
  dg.dt_max = 0.25 / std::max(1.0, s.n.cwiseAbs().maxCoeff());
  if (cfg.dt > dg.dt_max) {
    std::ostringstream os;
    os << "dt = " << cfg.dt << " exceeds the phase-accuracy limit " << dg.dt_max;
    dg.warnings.push_back(os.str());
  }
  const double expo = cfg.d == 3 ? 2.0 / 3.0 : 1.0;
  auto lambda_est = [&](double m) { return std::pow(peak0 / m, expo); };
  const double h_scale = std::abs(dg.H0) > 1e-12 ? std::abs(dg.H0) : 1.0;

  const long steps = std::lround(cfg.t_end / cfg.dt);
  const long out_every = std::max(1L, std::lround(cfg.output_every / cfg.dt));
  const long snap_every = cfg.snapshot_every > 0.0 ? std::max(1L, std::lround(cfg.snapshot_every / cfg.dt)) : 0;
  const bool sponge = cfg.sponge_fraction > 0.0 && cfg.sponge_strength > 0.0;

  // extremum tracking of lambda_est with 2% hysteresis
  const double hyst = 0.02;
  int trend = -1;
  double cand = lambda_est(peak0), cand_t = 0.0;

  auto record = [&](const SimState& st) {
    const double m = st.E.cwiseAbs().maxCoeff();
    const double lam = lambda_est(m);
    const double nn = sim.plasmon_number(st);
    const double hh = sim.hamiltonian(st);
    dg.rows.push_back({st.t, m, lam, nn, hh, dg.sponge_loss_N});
    dg.max_N_drift = std::max(dg.max_N_drift, std::abs(nn + dg.sponge_loss_N - dg.N0) / dg.N0);
    dg.max_H_drift = std::max(dg.max_H_drift, std::abs(hh + dg.sponge_loss_H - dg.H0) / h_scale);
    dg.max_amplitude_ratio = std::max(dg.max_amplitude_ratio, m / peak0);
    if (trend < 0) {
      if (lam < cand) {
        cand = lam;
        cand_t = st.t;
      } else if (lam > cand * (1.0 + hyst)) {
        dg.events.push_back({cand_t, "lambda_min", cand});
        trend = 1;
        cand = lam;
        cand_t = st.t;
      }
    } else {
      if (lam > cand) {
        cand = lam;
        cand_t = st.t;
      } else if (lam < cand * (1.0 - hyst)) {
        dg.events.push_back({cand_t, "lambda_max", cand});
        trend = -1;
        cand = lam;
        cand_t = st.t;
      }
    }
  };

  record(s);
  if (snap_every && snapshot) snapshot(sim, s);
  for (long k = 1; k <= steps; ++k) {
    sim.step(s, cfg.dt);
    if (sponge) {
      const double nb = sim.plasmon_number(s), hb = sim.hamiltonian(s);
      sim.apply_sponge(s, cfg.dt);
      dg.sponge_loss_N += nb - sim.plasmon_number(s);
      dg.sponge_loss_H += hb - sim.hamiltonian(s);
    }
    if (!dg.underresolved && sim.efold_cells(s) < 8.0) {
      dg.underresolved = true;
      dg.events.push_back({s.t, "underresolved", s.E.cwiseAbs().maxCoeff()});
      dg.warnings.push_back("focusing under-resolved (e-folding width below 8 cells) at t = " + std::to_string(s.t));
    }
    if (k % out_every == 0 || k == steps) record(s);
    if (snap_every && snapshot && k % snap_every == 0) snapshot(sim, s);
    if (dg.underresolved && cfg.stop_when_underresolved) {
      if (k % out_every != 0 && k != steps) record(s);
      dg.stopped_early = k != steps;
      break;
    }
  }
  dg.min_lambda_est = INFINITY;
  for (const auto& r : dg.rows) dg.min_lambda_est = std::min(dg.min_lambda_est, r.lambda_est);
  return dg;
}

}  // namespace qz
