#pragma once

#include <cmath>

#include "besovlab/errors.hpp"

namespace besovlab {

// Physical constants of the damped compressible flow: pressure law
// p(n) = A n^gamma, friction coefficient a, reference density n_bar.
// psi_bar caches the reference sound speed sqrt(p'(n_bar)); gamma = 1 is the
// isothermal law, where psi_bar reduces to sqrt(A).
struct PhysicalParams {
  double A = 1.0;
  double gamma = 1.4;
  double a = 1.0;
  double n_bar = 1.0;
  double psi_bar = 0.0;
};

inline double sound_speed_at(double n, const PhysicalParams& p) {
  // sqrt(p'(n)) = sqrt(A gamma) n^((gamma-1)/2)
  return std::sqrt(p.A * p.gamma) * std::pow(n, 0.5 * (p.gamma - 1.0));
}

inline PhysicalParams make_params(double A, double gamma, double a, double n_bar) {
  if (!(A > 0.0)) throw ConfigError("pressure constant A must be positive");
  if (!(gamma >= 1.0)) throw ConfigError("adiabatic exponent must satisfy gamma >= 1");
  if (gamma > 1.0 && gamma < 1.0 + 1e-8)
    throw ConfigError("gamma this close to 1 is numerically degenerate; use gamma = 1 (isothermal)");
  if (!(a > 0.0)) throw ConfigError("friction coefficient a must be positive");
  if (!(n_bar > 0.0)) throw ConfigError("reference density must be positive");
  PhysicalParams p{A, gamma, a, n_bar, 0.0};
  p.psi_bar = sound_speed_at(n_bar, p);
  return p;
}

inline void validate_params(const PhysicalParams& p) {
  PhysicalParams fresh = make_params(p.A, p.gamma, p.a, p.n_bar);
  if (std::abs(fresh.psi_bar - p.psi_bar) > 1e-14 * std::max(1.0, std::abs(fresh.psi_bar)))
    throw ConfigError("stored reference sound speed disagrees with (A, gamma, n_bar)");
}

inline bool is_isothermal(const PhysicalParams& p) { return p.gamma == 1.0; }

}  // namespace besovlab
