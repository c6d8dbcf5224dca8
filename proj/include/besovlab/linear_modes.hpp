#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>

#include "besovlab/params.hpp"

namespace besovlab {

// Exact solution of the linearized system restricted to one Fourier mode k.
// Writing u = u_par k/|k| + u_perp, the longitudinal pair obeys
//   d/dt (m, u_par) = [[0, -i kappa], [-i kappa, -a]] (m, u_par),
// kappa = psi_bar |k|, while each transverse component decays as exp(-a t).
// The 2x2 exponential is evaluated through cosh/sinhc of
// omega = sqrt(a^2/4 - kappa^2), which covers the oscillatory, critically
// damped, and overdamped regimes in one closed form.

struct AcousticModeSolution {
  std::complex<double> m;
  std::complex<double> u_par;
  std::array<std::complex<double>, 3> u_perp{};
};

namespace detail {

// t * sinhc(omega t) = sinh(omega t)/omega, stable as omega -> 0.
inline std::complex<double> sinh_over(std::complex<double> omega, double t) {
  const std::complex<double> z = omega * t;
  if (std::abs(z) < 1e-4) {
    const std::complex<double> z2 = z * z;
    return t * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
  }
  return std::sinh(z) / omega;
}

}  // namespace detail

inline AcousticModeSolution linear_mode_solution(std::span<const double> k, const PhysicalParams& p,
                                                 std::complex<double> m0, std::complex<double> u_par0,
                                                 std::span<const std::complex<double>> u_perp0, double t) {
  double k2 = 0.0;
  for (double kj : k) k2 += kj * kj;
  if (!(k2 > 0.0)) throw ConfigError("linear mode solution needs a nonzero wavevector");
  const double kappa = p.psi_bar * std::sqrt(k2);

  const double disc = 0.25 * p.a * p.a - kappa * kappa;
  const std::complex<double> omega = std::sqrt(std::complex<double>(disc, 0.0));
  const std::complex<double> c = std::cosh(omega * t);
  const std::complex<double> s = detail::sinh_over(omega, t);
  const double decay = std::exp(-0.5 * p.a * t);
  const std::complex<double> off(0.0, -kappa);

  AcousticModeSolution out;
  out.m = decay * ((c + 0.5 * p.a * s) * m0 + off * s * u_par0);
  out.u_par = decay * (off * s * m0 + (c - 0.5 * p.a * s) * u_par0);
  const double perp_decay = std::exp(-p.a * t);
  for (std::size_t j = 0; j < u_perp0.size() && j < 3; ++j) out.u_perp[j] = perp_decay * u_perp0[j];
  return out;
}

}  // namespace besovlab
