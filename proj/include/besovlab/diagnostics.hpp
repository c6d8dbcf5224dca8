#pragma once

#include <vector>

#include "besovlab/euler.hpp"
#include "besovlab/norms.hpp"
#include "besovlab/paraproduct.hpp"

namespace besovlab {

// Scalar snapshot of a state used for time series and the global-estimate
// checks. U bundles (m, u); U_t is computed algebraically from the equations
// of motion, never by differencing the trajectory, so every record is a pure
// function of its state.
struct DiagnosticsRecord {
  double t = 0.0;
  double besov_U = 0.0;         // ||(m,u)||_{B^{sigma+eps}_{2,2}}
  double besov_Ut = 0.0;        // ||(m_t,u_t)||_{B^{sigma-1+eps}_{2,2}}
  double energy = 0.0;          // besov_U^2 + besov_Ut^2
  double dissipation = 0.0;     // ||u||^2_{sigma+eps} + ||grad m||^2 + ||U_t||^2 (both at sigma-1+eps)
  double vorticity_norm = 0.0;  // ||curl u||_{B^{sigma-1}_{2,1}}; 0 in 1-D where curl is undefined
  double grad_m_norm = 0.0;     // ||grad m||_{B^{sigma-1+eps'}_{2,2}}
  double min_density = 0.0;
  double sup_m = 0.0;
  double sup_u = 0.0;
  std::vector<double> block_energies;  // ||block_q m||^2 + ||block_q u||^2, q = -1..q_max
};

inline double default_sigma(int dim) { return 1.0 + 0.5 * static_cast<double>(dim); }

// Same formula as the dynamics right-hand side; named for its role in the
// diagnostics, where (m_t, u_t) enters the energy algebraically.
inline StateTangent time_derivative_state(const State& s, const PhysicalParams& p,
                                          const RhsOptions& opts = {}) {
  return rhs(s, p, opts);
}

namespace detail {

inline std::vector<const Field*> state_components(const Field& m, const VectorField& u) {
  std::vector<const Field*> c{&m};
  for (int j = 0; j < u.size(); ++j) c.push_back(&u[j]);
  return c;
}

}  // namespace detail

inline double energy_functional(const State& s, const PhysicalParams& p, double sigma, double eps,
                                const DyadicPartition& part, const RhsOptions& opts = {}) {
  StateTangent ut = time_derivative_state(s, p, opts);
  const auto uc = detail::state_components(s.m, s.u);
  const auto tc = detail::state_components(ut.m, ut.u);
  const double nu = besov_norm(part, std::span<const Field* const>(uc), {sigma + eps, 2.0, 2.0});
  const double nt = besov_norm(part, std::span<const Field* const>(tc), {sigma - 1.0 + eps, 2.0, 2.0});
  return nu * nu + nt * nt;
}

inline double dissipation_functional(const State& s, const PhysicalParams& p, double sigma, double eps,
                                     const DyadicPartition& part, const RhsOptions& opts = {}) {
  StateTangent ut = time_derivative_state(s, p, opts);
  const auto tc = detail::state_components(ut.m, ut.u);
  VectorField grad_m = spectral_gradient(s.m);
  const double a = besov_norm(part, s.u, {sigma + eps, 2.0, 2.0});
  const double b = besov_norm(part, grad_m, {sigma - 1.0 + eps, 2.0, 2.0});
  const double c = besov_norm(part, std::span<const Field* const>(tc), {sigma - 1.0 + eps, 2.0, 2.0});
  return a * a + b * b + c * c;
}

inline DiagnosticsRecord compute_diagnostics(const State& s, const PhysicalParams& p,
                                             const DyadicPartition& part, double t, double sigma,
                                             double eps, double eps_prime, const RhsOptions& opts = {}) {
  DiagnosticsRecord rec;
  rec.t = t;

  StateTangent ut = time_derivative_state(s, p, opts);
  const auto uc = detail::state_components(s.m, s.u);
  const auto tc = detail::state_components(ut.m, ut.u);
  rec.besov_U = besov_norm(part, std::span<const Field* const>(uc), {sigma + eps, 2.0, 2.0});
  rec.besov_Ut = besov_norm(part, std::span<const Field* const>(tc), {sigma - 1.0 + eps, 2.0, 2.0});
  rec.energy = rec.besov_U * rec.besov_U + rec.besov_Ut * rec.besov_Ut;

  VectorField grad_m = spectral_gradient(s.m);
  {
    const double a = besov_norm(part, s.u, {sigma + eps, 2.0, 2.0});
    const double b = besov_norm(part, grad_m, {sigma - 1.0 + eps, 2.0, 2.0});
    rec.dissipation = a * a + b * b + rec.besov_Ut * rec.besov_Ut;
  }
  rec.grad_m_norm = besov_norm(part, grad_m, {sigma - 1.0 + eps_prime, 2.0, 2.0});

  const Grid& g = s.m.grid();
  if (g.dim == 3) {
    rec.vorticity_norm = besov_norm(part, vorticity_3d(s.u), {sigma - 1.0, 2.0, 1.0});
  } else if (g.dim == 2) {
    rec.vorticity_norm = besov_norm(part, vorticity_2d(s.u), {sigma - 1.0, 2.0, 1.0});
  }

  rec.sup_m = sup_abs(s.m);
  rec.sup_u = sup_magnitude(s.u);

  if (s.branch == Branch::isothermal) {
    const double inv_sqrtA = 1.0 / std::sqrt(p.A);
    rec.min_density = p.n_bar * std::exp(inv_sqrtA * min_value(s.m));
  } else {
    const double margin = positivity_margin(s, p);
    if (margin > 0.0) {
      const double expo = 2.0 / (p.gamma - 1.0);
      rec.min_density = std::pow(margin / std::sqrt(p.A * p.gamma), expo);
    } else {
      rec.min_density = margin;  // nonpositive: signals the range violation
    }
  }

  rec.block_energies.reserve(static_cast<std::size_t>(part.q_max) + 2);
  for (int q = -1; q <= part.q_max; ++q) {
    Field bm = dyadic_block(part, s.m, q);
    double e = lp_norm(bm, 2.0);
    e = e * e;
    for (int j = 0; j < g.dim; ++j) {
      Field bu = dyadic_block(part, s.u[j], q);
      const double n = lp_norm(bu, 2.0);
      e += n * n;
    }
    rec.block_energies.push_back(e);
  }
  return rec;
}

}  // namespace besovlab
