#pragma once

#include <cmath>
#include <utility>

#include "besovlab/norms.hpp"
#include "besovlab/operators.hpp"
#include "besovlab/params.hpp"

namespace besovlab {

// Symmetrized state of the damped compressible flow. For gamma > 1 the scalar
// is m = 2/(gamma-1) (psi(n) - psi_bar) with psi the sound speed, so
//   n = n_bar valid iff  (gamma-1)/2 m + psi_bar > 0.
// For gamma = 1 (isothermal) the scalar is sqrt(A) (ln n - ln n_bar), which is
// defined for every real value. Both branches evolve under
//   dm/dt = -psi_bar div u - u.grad m - (gamma-1)/2 m div u
//   du/dt = -psi_bar grad m - a u - (u.grad) u - (gamma-1)/2 m grad m
// with the (gamma-1)/2 terms dropping out in the isothermal case.
enum class Branch { isentropic, isothermal };

struct State {
  Field m;
  VectorField u;
  Branch branch = Branch::isentropic;
};

struct StateTangent {
  Field m;
  VectorField u;
};

// Per-term switches for the quadratic part of the right-hand side; the linear
// acoustic and friction terms are always on. Turning everything off gives the
// linearization about the constant background.
struct NonlinearTerms {
  bool advect_m = true;    // u . grad m
  bool dilation = true;    // (gamma-1)/2 m div u
  bool advect_u = true;    // (u . grad) u
  bool pressure = true;    // (gamma-1)/2 m grad m

  static NonlinearTerms all() { return {}; }
  static NonlinearTerms none() { return {false, false, false, false}; }
  bool any() const { return advect_m || dilation || advect_u || pressure; }
};

struct RhsOptions {
  bool dealias = true;
  NonlinearTerms terms;
};

inline Field sound_speed(const Field& n, const PhysicalParams& p) {
  Field out(n.grid());
  auto src = n.samples();
  auto dst = out.overwrite_samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (!(src[i] > 0.0)) throw PositivityError("density must be positive to evaluate the sound speed");
    dst[i] = sound_speed_at(src[i], p);
  }
  return out;
}

inline State to_isothermal(const Field& n, const VectorField& u, const PhysicalParams& p) {
  State s;
  s.branch = Branch::isothermal;
  s.u = u;
  s.m = Field(n.grid());
  const double sqrtA = std::sqrt(p.A);
  auto src = n.samples();
  auto dst = s.m.overwrite_samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (!(src[i] > 0.0)) throw PositivityError("density must be positive for the isothermal variables");
    dst[i] = sqrtA * (std::log(src[i]) - std::log(p.n_bar));
  }
  return s;
}

inline State to_symmetric(const Field& n, const VectorField& u, const PhysicalParams& p) {
  if (is_isothermal(p)) return to_isothermal(n, u, p);
  State s;
  s.branch = Branch::isentropic;
  s.u = u;
  s.m = Field(n.grid());
  const double c = 2.0 / (p.gamma - 1.0);
  auto src = n.samples();
  auto dst = s.m.overwrite_samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (!(src[i] > 0.0)) throw PositivityError("density must be positive for the symmetrized variables");
    dst[i] = c * (sound_speed_at(src[i], p) - p.psi_bar);
  }
  return s;
}

// Smallest value of (gamma-1)/2 m + psi_bar over the grid; the inverse change
// of variables exists iff this stays positive. Isothermal states are always
// invertible, reported as +inf.
inline double positivity_margin(const State& s, const PhysicalParams& p) {
  if (s.branch == Branch::isothermal) return kInf;
  return 0.5 * (p.gamma - 1.0) * min_value(s.m) + p.psi_bar;
}

inline std::pair<Field, VectorField> from_symmetric(const State& s, const PhysicalParams& p) {
  Field n(s.m.grid());
  auto src = s.m.samples();
  auto dst = n.overwrite_samples();
  if (s.branch == Branch::isothermal) {
    const double inv_sqrtA = 1.0 / std::sqrt(p.A);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = p.n_bar * std::exp(inv_sqrtA * src[i]);
  } else {
    // invert psi(n) = (gamma-1)/2 m + psi_bar
    const double expo = 2.0 / (p.gamma - 1.0);
    const double root = std::sqrt(p.A * p.gamma);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double psi = 0.5 * (p.gamma - 1.0) * src[i] + p.psi_bar;
      if (!(psi > 0.0)) throw PositivityError("symmetrized state left the positive-density range");
      dst[i] = std::pow(psi / root, expo);
    }
  }
  return {std::move(n), s.u};
}

inline StateTangent rhs(const State& s, const PhysicalParams& p, const RhsOptions& opts = {}) {
  const Grid& g = s.m.grid();
  const bool iso = s.branch == Branch::isothermal;
  const double half_gm1 = iso ? 0.0 : 0.5 * (p.gamma - 1.0);

  Field div_u = divergence(s.u);
  VectorField grad_m = spectral_gradient(s.m);

  StateTangent out;
  out.m = scaled(div_u, -p.psi_bar);
  if (opts.terms.advect_m) {
    for (int j = 0; j < g.dim; ++j) {
      Field t = times(s.u[j], grad_m[j], false);
      axpy(out.m, -1.0, t);
    }
  }
  if (opts.terms.dilation && !iso) {
    Field t = times(s.m, div_u, false);
    axpy(out.m, -half_gm1, t);
  }
  if (opts.dealias) dealias_inplace(out.m);

  out.u = VectorField(g);
  for (int i = 0; i < g.dim; ++i) {
    Field acc = scaled(grad_m[i], -p.psi_bar);
    axpy(acc, -p.a, s.u[i]);
    if (opts.terms.advect_u) {
      VectorField grad_ui = spectral_gradient(s.u[i]);
      for (int j = 0; j < g.dim; ++j) {
        Field t = times(s.u[j], grad_ui[j], false);
        axpy(acc, -1.0, t);
      }
    }
    if (opts.terms.pressure && !iso) {
      Field t = times(s.m, grad_m[i], false);
      axpy(acc, -half_gm1, t);
    }
    if (opts.dealias) dealias_inplace(acc);
    out.u[i] = std::move(acc);
  }
  return out;
}

// Isothermal entry point with the branch made explicit at the call site; the
// state must carry gamma = 1 physics.
inline StateTangent rhs_isothermal(const State& s, const PhysicalParams& p, const RhsOptions& opts = {}) {
  if (s.branch != Branch::isothermal || !is_isothermal(p))
    throw ConfigError("rhs_isothermal needs an isothermal state and gamma = 1");
  return rhs(s, p, opts);
}

inline State add_scaled(const State& s, double c, const StateTangent& k) {
  State out;
  out.branch = s.branch;
  out.m = s.m;
  axpy(out.m, c, k.m);
  out.u = s.u;
  for (int j = 0; j < out.u.size(); ++j) axpy(out.u[j], c, k.u[j]);
  return out;
}

// Advisory step size: the acoustic+advective CFL bound capped by the friction
// time scale, dt <= cfl/a.
inline double cfl_dt(const State& s, const PhysicalParams& p, double cfl) {
  if (!(cfl > 0.0)) throw ConfigError("cfl number must be positive");
  const double half_gm1 = s.branch == Branch::isothermal ? 0.0 : 0.5 * (p.gamma - 1.0);
  const double speed = p.psi_bar + sup_magnitude(s.u) + half_gm1 * sup_abs(s.m);
  const double h = s.m.grid().spacing();
  return std::min(cfl * h / speed, cfl / p.a);
}

inline double cfl_dt(const State& s, const PhysicalParams& p, const Grid& grid, double cfl) {
  if (grid != s.m.grid()) throw ConfigError("cfl grid does not match the state's grid");
  return cfl_dt(s, p, cfl);
}

inline State step_rk4(const State& s, const PhysicalParams& p, double dt, const RhsOptions& opts = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step size must be positive and finite");
  StateTangent k1 = rhs(s, p, opts);
  StateTangent k2 = rhs(add_scaled(s, 0.5 * dt, k1), p, opts);
  StateTangent k3 = rhs(add_scaled(s, 0.5 * dt, k2), p, opts);
  StateTangent k4 = rhs(add_scaled(s, dt, k3), p, opts);

  State out = s;
  const double c1 = dt / 6.0;
  axpy(out.m, c1, k1.m);
  axpy(out.m, 2.0 * c1, k2.m);
  axpy(out.m, 2.0 * c1, k3.m);
  axpy(out.m, c1, k4.m);
  for (int j = 0; j < out.u.size(); ++j) {
    axpy(out.u[j], c1, k1.u[j]);
    axpy(out.u[j], 2.0 * c1, k2.u[j]);
    axpy(out.u[j], 2.0 * c1, k3.u[j]);
    axpy(out.u[j], c1, k4.u[j]);
  }
  if (!(positivity_margin(out, p) > 0.0))
    throw PositivityError("time step drove the symmetrized density out of range");
  return out;
}

// Vorticity, dimension-typed: the full curl in 3-D, the scalar rotation in 2-D.
inline VectorField vorticity_3d(const VectorField& u) { return curl(u); }
inline Field vorticity_2d(const VectorField& u) { return curl_2d(u); }

}  // namespace besovlab
