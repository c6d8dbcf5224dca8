#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "besovlab/diagnostics.hpp"
#include "besovlab/synthesis.hpp"

namespace besovlab {

// Initial-condition descriptor. `kind` selects the generator; unused knobs
// are ignored by kinds that do not read them.
struct IcSpec {
  std::string kind = "random_band";  // equilibrium | random_band | vortex | irrotational | single_mode
  double amplitude = 0.0;
  double band_lo = 1.0;
  double band_hi = 4.0;
  std::uint64_t seed = 1;
  std::array<int, 3> mode = {1, 0, 0};
  double m_amp = 0.0;
  double u_par_amp = 0.0;
  double u_perp_amp = 0.0;
  std::array<double, 3> perp_dir = {0.0, 1.0, 0.0};
  // optional extra perturbation on top of the main IC (stability studies)
  double perturb_amplitude = 0.0;
  std::uint64_t perturb_seed = 999;
};

struct SimConfig {
  int dim = 3;
  int points = 32;
  double period = 2.0 * std::numbers::pi;
  PhysicalParams params = make_params(1.0, 1.4, 1.0, 1.0);
  double cfl = 0.45;
  double t_end = 1.0;
  IcSpec ic;
  bool dealias = true;
  bool linearize = false;       // shorthand: drop every quadratic term
  NonlinearTerms terms;         // fine-grained switches, honored when linearize is false
  int record_every = 1;
  std::optional<double> blowup_threshold;  // default: 1e3 x the initial data size
  std::optional<double> fixed_dt;          // overrides the CFL choice when set
  double eps = 0.1;
  double eps_prime = 0.05;
  bool keep_states = false;
  double partition_tol = 1e-12;

  double sigma() const { return default_sigma(dim); }
  RhsOptions rhs_options() const {
    RhsOptions o;
    o.dealias = dealias;
    o.terms = linearize ? NonlinearTerms::none() : terms;
    return o;
  }
};

enum class RunStatus { completed, blowup, positivity_lost };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    default: return "positivity_lost";
  }
}

struct Trajectory {
  SimConfig config;
  double dt = 0.0;
  RunStatus status = RunStatus::completed;
  std::vector<DiagnosticsRecord> records;
  std::vector<State> states;  // filled only when config.keep_states
  std::optional<State> final_state;  // last healthy state
};

inline void validate_config(const SimConfig& cfg) {
  validate_params(cfg.params);
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) throw ConfigError("cfl must lie in (0, 1]");
  if (cfg.ic.amplitude < 0.0) throw ConfigError("ic amplitude must be nonnegative");
  if (cfg.record_every < 1) throw ConfigError("record_every must be >= 1");
  if (!(cfg.eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(cfg.eps_prime > 0.0) || cfg.eps_prime >= cfg.eps)
    throw ConfigError("eps_prime must satisfy 0 < eps_prime < eps");
  if (cfg.fixed_dt && !(*cfg.fixed_dt > 0.0)) throw ConfigError("fixed_dt must be positive");
  if (cfg.blowup_threshold && !(*cfg.blowup_threshold >= 0.0))
    throw ConfigError("blowup_threshold must be nonnegative");
}

inline State build_initial_state(const SimConfig& cfg, const Grid& g) {
  const IcSpec& ic = cfg.ic;
  if (ic.kind == "equilibrium") {
    State s;
    s.branch = is_isothermal(cfg.params) ? Branch::isothermal : Branch::isentropic;
    s.m = Field(g);
    s.u = VectorField(g);
    return s;
  }
  State s;
  if (ic.kind == "random_band") {
    s = random_band_limited_ic(g, cfg.params, ic.amplitude, ic.band_lo, ic.band_hi, ic.seed, IcShape::generic);
  } else if (ic.kind == "vortex") {
    s = random_band_limited_ic(g, cfg.params, ic.amplitude, ic.band_lo, ic.band_hi, ic.seed,
                               IcShape::divergence_free);
  } else if (ic.kind == "irrotational") {
    s = random_band_limited_ic(g, cfg.params, ic.amplitude, ic.band_lo, ic.band_hi, ic.seed,
                               IcShape::irrotational);
  } else if (ic.kind == "single_mode") {
    s = single_mode_ic(g, cfg.params, ic.mode, ic.m_amp, ic.u_par_amp, ic.u_perp_amp, ic.perp_dir);
  } else {
    throw ConfigError("unknown ic kind: " + ic.kind);
  }
  if (ic.perturb_amplitude > 0.0) {
    Field dm = band_limited_noise(g, ic.band_lo, ic.band_hi, ic.perturb_seed, 100);
    rescale_sup(dm, ic.perturb_amplitude);
    axpy(s.m, 1.0, dm);
    for (int j = 0; j < g.dim; ++j) {
      Field du = band_limited_noise(g, ic.band_lo, ic.band_hi, ic.perturb_seed, static_cast<std::uint32_t>(101 + j));
      rescale_sup(du, ic.perturb_amplitude);
      axpy(s.u[j], 1.0, du);
    }
  }
  return s;
}

// Fixed-step RK4 run with records every `record_every` steps plus t = 0 and
// the final state. The step size is frozen from the initial state (or
// fixed_dt); the last step is shortened to land on t_end exactly.
inline Trajectory simulate(const SimConfig& cfg) {
  validate_config(cfg);
  const Grid g = make_grid(cfg.dim, cfg.points, cfg.period);
  const DyadicPartition part = build_partition(g, cfg.partition_tol);
  const RhsOptions opts = cfg.rhs_options();
  const double sigma = cfg.sigma();

  Trajectory traj;
  traj.config = cfg;

  State s = build_initial_state(cfg, g);
  // single_mode and perturbed data do not pass through ic.amplitude, so the
  // default threshold is sized off the state that was actually built.
  const double ic_scale = std::max(cfg.ic.amplitude, sup_abs(s.m) + sup_magnitude(s.u));
  const double threshold = cfg.blowup_threshold.value_or(1e3 * ic_scale);
  const double dt = cfg.fixed_dt ? *cfg.fixed_dt : cfl_dt(s, cfg.params, cfg.cfl);
  traj.dt = dt;

  double t = 0.0;
  auto record = [&](const State& st, double time) {
    traj.records.push_back(compute_diagnostics(st, cfg.params, part, time, sigma, cfg.eps, cfg.eps_prime, opts));
    if (cfg.keep_states) traj.states.push_back(st);
  };
  auto over_threshold = [&](const State& st) {
    return sup_abs(st.m) > threshold || sup_magnitude(st.u) > threshold;
  };

  record(s, 0.0);
  if (over_threshold(s)) {
    traj.status = RunStatus::blowup;
    traj.final_state = s;
    return traj;
  }

  const double t_tol = 1e-12 * cfg.t_end;
  long step = 0;
  while (t < cfg.t_end - t_tol) {
    const double h = std::min(dt, cfg.t_end - t);
    try {
      s = step_rk4(s, cfg.params, h, opts);
    } catch (const PositivityError&) {
      traj.status = RunStatus::positivity_lost;
      traj.final_state = s;
      return traj;
    }
    t += h;
    ++step;

    const bool nonfinite = !std::isfinite(sup_abs(s.m)) || !std::isfinite(sup_magnitude(s.u));
    if (nonfinite || over_threshold(s)) {
      record(s, t);
      traj.status = RunStatus::blowup;
      traj.final_state = s;
      return traj;
    }
    const bool final_step = !(t < cfg.t_end - t_tol);
    if (step % cfg.record_every == 0 || final_step) record(s, t);
  }
  traj.status = RunStatus::completed;
  traj.final_state = s;
  return traj;
}

}  // namespace besovlab
