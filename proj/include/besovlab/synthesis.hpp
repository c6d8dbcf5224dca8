#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "besovlab/euler.hpp"
#include "besovlab/operators.hpp"

namespace besovlab {

// Band-limited random field synthesis. Coefficients are drawn per wavenumber
// from a hash of (seed, stream, mode), not from a sequential RNG, so the same
// (seed, stream) names the same function on every resolution that contains
// the band. That makes refinement studies compare one fixed function instead
// of two different draws.

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t h) {
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

// standard complex gaussian attached to one canonical mode
inline std::complex<double> mode_coefficient(std::uint64_t seed, std::uint32_t stream,
                                             const std::array<int, 3>& m) {
  std::uint64_t key = seed ^ (0x51ED2701A3B4C5D6ull + (static_cast<std::uint64_t>(stream) << 48));
  for (int j = 0; j < 3; ++j)
    key = splitmix64(key ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(m[static_cast<std::size_t>(j)]) + 0x8000));
  const double u1 = uniform01(splitmix64(key));
  const double u2 = uniform01(splitmix64(key + 0x632BE59BD9B4E019ull));
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

// Hermitian-consistent coefficient for any signed mode: conjugate pairs get
// conjugate values, self-conjugate modes get real ones.
inline std::complex<double> hermitian_coefficient(std::uint64_t seed, std::uint32_t stream,
                                                  std::array<int, 3> m) {
  bool flip = false;
  for (int j = 0; j < 3; ++j) {
    if (m[static_cast<std::size_t>(j)] > 0) break;
    if (m[static_cast<std::size_t>(j)] < 0) {
      flip = true;
      break;
    }
  }
  if (flip)
    for (auto& c : m) c = -c;
  std::complex<double> v = mode_coefficient(seed, stream, m);
  if (m[0] == 0 && m[1] == 0 && m[2] == 0) v = {v.real(), 0.0};
  return flip ? std::conj(v) : v;
}

}  // namespace detail

// Random field with spectrum supported on k_lo <= |k| <= k_hi (physical
// wavenumbers). Nyquist planes are left empty regardless of the band.
inline Field band_limited_noise(const Grid& g, double k_lo, double k_hi, std::uint64_t seed,
                                std::uint32_t stream = 0) {
  if (!(k_lo >= 0.0) || !(k_hi >= k_lo)) throw ConfigError("band must satisfy 0 <= k_lo <= k_hi");
  if (k_hi > g.kmax()) throw ConfigError("band reaches past the Nyquist wavenumber");
  Field f(g);
  auto spec = f.overwrite_spectrum();
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    const double r = mode_abs_k(g, m);
    if (r < k_lo || r > k_hi || mode_is_nyquist(g, m)) {
      spec[flat] = 0.0;
      return;
    }
    spec[flat] = detail::hermitian_coefficient(seed, stream, m);
  });
  return f;
}

inline void rescale_sup(Field& f, double amplitude) {
  const double s = sup_abs(f);
  if (s == 0.0) return;
  const double c = amplitude / s;
  auto v = f.mutable_samples();
  for (auto& x : v) x *= c;
}

inline void rescale_sup(VectorField& u, double amplitude) {
  const double s = sup_magnitude(u);
  if (s == 0.0) return;
  const double c = amplitude / s;
  for (int j = 0; j < u.size(); ++j) {
    auto v = u[j].mutable_samples();
    for (auto& x : v) x *= c;
  }
}

// Leray projection onto divergence-free fields, mode by mode:
// u_hat -> u_hat - k (k . u_hat)/|k|^2.
inline VectorField project_divergence_free(const VectorField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  std::vector<std::span<const std::complex<double>>> in;
  std::vector<std::span<std::complex<double>>> dst;
  for (int j = 0; j < g.dim; ++j) in.push_back(u[j].spectrum());
  for (int j = 0; j < g.dim; ++j) dst.push_back(out[j].overwrite_spectrum());
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    double k2 = 0.0;
    for (int j = 0; j < g.dim; ++j) k2 += static_cast<double>(m[static_cast<std::size_t>(j)]) * m[static_cast<std::size_t>(j)];
    if (k2 == 0.0) {
      for (int j = 0; j < g.dim; ++j) dst[static_cast<std::size_t>(j)][flat] = in[static_cast<std::size_t>(j)][flat];
      return;
    }
    std::complex<double> kdotu{0.0, 0.0};
    for (int j = 0; j < g.dim; ++j) kdotu += static_cast<double>(m[static_cast<std::size_t>(j)]) * in[static_cast<std::size_t>(j)][flat];
    for (int j = 0; j < g.dim; ++j)
      dst[static_cast<std::size_t>(j)][flat] =
          in[static_cast<std::size_t>(j)][flat] - static_cast<double>(m[static_cast<std::size_t>(j)]) * kdotu / k2;
  });
  return out;
}

enum class IcShape {
  generic,          // independent random m and u
  divergence_free,  // m = 0, u projected onto divergence-free fields
  irrotational,     // m random, u = grad(potential)
};

inline State random_band_limited_ic(const Grid& g, const PhysicalParams& p, double amplitude, double k_lo,
                                    double k_hi, std::uint64_t seed, IcShape shape = IcShape::generic) {
  if (amplitude < 0.0) throw ConfigError("amplitude must be nonnegative");
  if (k_hi > (2.0 / 3.0) * g.kmax())
    throw ConfigError("band must stay below (2/3) of the Nyquist wavenumber for dealiasing headroom");

  State s;
  s.branch = is_isothermal(p) ? Branch::isothermal : Branch::isentropic;
  s.m = Field(g);
  s.u = VectorField(g);
  if (amplitude == 0.0) return s;

  switch (shape) {
    case IcShape::generic: {
      s.m = band_limited_noise(g, k_lo, k_hi, seed, 0);
      rescale_sup(s.m, amplitude);
      for (int j = 0; j < g.dim; ++j) s.u[j] = band_limited_noise(g, k_lo, k_hi, seed, static_cast<std::uint32_t>(1 + j));
      rescale_sup(s.u, amplitude);
      break;
    }
    case IcShape::divergence_free: {
      VectorField raw(g);
      for (int j = 0; j < g.dim; ++j) raw[j] = band_limited_noise(g, k_lo, k_hi, seed, static_cast<std::uint32_t>(1 + j));
      s.u = project_divergence_free(raw);
      rescale_sup(s.u, amplitude);
      break;
    }
    case IcShape::irrotational: {
      s.m = band_limited_noise(g, k_lo, k_hi, seed, 0);
      rescale_sup(s.m, amplitude);
      Field pot = band_limited_noise(g, k_lo, k_hi, seed, 7);
      s.u = spectral_gradient(pot);
      rescale_sup(s.u, amplitude);
      break;
    }
  }
  if (!(positivity_margin(s, p) > 0.0))
    throw ConfigError("amplitude too large for the isentropic positivity range");
  return s;
}

// Real single-mode state: m = 2 Re(m_amp e^{ik.x}), u likewise along the unit
// longitudinal direction k/|k| and an explicit transverse direction.
inline State single_mode_ic(const Grid& g, const PhysicalParams& p, const std::array<int, 3>& mode,
                            std::complex<double> m_amp, std::complex<double> u_par_amp,
                            std::complex<double> u_perp_amp, const std::array<double, 3>& perp_dir) {
  State s;
  s.branch = is_isothermal(p) ? Branch::isothermal : Branch::isentropic;
  s.m = Field(g);
  s.u = VectorField(g);

  double mk2 = 0.0;
  for (int j = 0; j < g.dim; ++j) mk2 += static_cast<double>(mode[static_cast<std::size_t>(j)]) * mode[static_cast<std::size_t>(j)];
  if (!(mk2 > 0.0)) throw ConfigError("single-mode state needs a nonzero mode vector");

  double pk = 0.0, pdotk = 0.0;
  for (int j = 0; j < g.dim; ++j) {
    pk += perp_dir[static_cast<std::size_t>(j)] * perp_dir[static_cast<std::size_t>(j)];
    pdotk += perp_dir[static_cast<std::size_t>(j)] * mode[static_cast<std::size_t>(j)];
  }
  if (u_perp_amp != 0.0) {
    if (!(pk > 0.0)) throw ConfigError("transverse direction must be nonzero");
    if (std::abs(pdotk) > 1e-12 * std::sqrt(pk * mk2))
      throw ConfigError("transverse direction must be orthogonal to the mode vector");
  }

  const double k0 = g.k0();
  const double inv_norm = 1.0 / std::sqrt(mk2);
  const double inv_pnorm = pk > 0.0 ? 1.0 / std::sqrt(pk) : 0.0;
  auto ms = s.m.overwrite_samples();
  std::vector<std::span<double>> us;
  for (int j = 0; j < g.dim; ++j) us.push_back(s.u[j].overwrite_samples());
  for_each_sample_point(g, [&](std::size_t flat, const std::array<double, 3>& x) {
    double phase = 0.0;
    for (int j = 0; j < g.dim; ++j) phase += k0 * mode[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    const std::complex<double> e{std::cos(phase), std::sin(phase)};
    ms[flat] = 2.0 * std::real(m_amp * e);
    for (int j = 0; j < g.dim; ++j) {
      const double dir_par = mode[static_cast<std::size_t>(j)] * inv_norm;
      const double dir_perp = perp_dir[static_cast<std::size_t>(j)] * inv_pnorm;
      us[static_cast<std::size_t>(j)][flat] =
          2.0 * std::real((u_par_amp * dir_par + u_perp_amp * dir_perp) * e);
    }
  });
  return s;
}

}  // namespace besovlab
