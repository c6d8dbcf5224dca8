#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>

#include "besovlab/errors.hpp"

namespace besovlab {

// Uniform periodic grid on [0, period)^dim with the same point count along
// every axis. Spectral data lives on the half lattice produced by a
// real-to-complex transform: the last active axis keeps modes 0..n/2, the
// other axes keep all n modes with the upper half wrapping to negative
// wavenumbers (index n/2 maps to -n/2).
struct Grid {
  int dim = 0;
  int points_per_axis = 0;
  double period = 0.0;

  bool operator==(const Grid&) const = default;

  double spacing() const { return period / points_per_axis; }
  double k0() const { return 2.0 * std::numbers::pi / period; }
  double kmax() const { return 0.5 * points_per_axis * k0(); }
  double cell_volume() const { return std::pow(spacing(), dim); }
  double volume() const { return std::pow(period, dim); }

  std::size_t point_count() const {
    std::size_t c = 1;
    for (int j = 0; j < dim; ++j) c *= static_cast<std::size_t>(points_per_axis);
    return c;
  }
  std::size_t spectral_count() const {
    std::size_t c = static_cast<std::size_t>(points_per_axis) / 2 + 1;
    for (int j = 0; j < dim - 1; ++j) c *= static_cast<std::size_t>(points_per_axis);
    return c;
  }

  // Logical shapes padded with trailing 1s so that three nested loops cover
  // every dimension count uniformly. Axis dim-1 is the halved one.
  std::array<std::size_t, 3> sample_shape() const {
    std::array<std::size_t, 3> s{1, 1, 1};
    for (int j = 0; j < dim; ++j) s[static_cast<std::size_t>(j)] = static_cast<std::size_t>(points_per_axis);
    return s;
  }
  std::array<std::size_t, 3> spectral_shape() const {
    auto s = sample_shape();
    s[static_cast<std::size_t>(dim - 1)] = static_cast<std::size_t>(points_per_axis) / 2 + 1;
    return s;
  }
};

inline bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

inline Grid make_grid(int dim, int points_per_axis, double period) {
  if (dim < 1 || dim > 3) throw ConfigError("grid dim must be 1, 2, or 3, got " + std::to_string(dim));
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
    throw ConfigError("points per axis must be a power of two >= 8, got " + std::to_string(points_per_axis));
  if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("grid period must be positive and finite");
  return Grid{dim, points_per_axis, period};
}

// Signed integer mode for a full (non-halved) axis index.
inline int signed_mode(int idx, int n) { return idx < n / 2 ? idx : idx - n; }

// Visits every stored spectral coefficient. fn(flat, m) where m holds the
// signed integer mode per axis (inactive axes stay 0). On the halved axis the
// stored index n/2 is the Nyquist mode; it is reported as +n/2 and callers
// that build derivative multipliers zero it explicitly.
template <class F>
inline void for_each_spectral_mode(const Grid& g, F&& fn) {
  const int n = g.points_per_axis;
  const auto shape = g.spectral_shape();
  const int last = g.dim - 1;
  std::array<int, 3> m{0, 0, 0};
  std::size_t flat = 0;
  for (std::size_t i0 = 0; i0 < shape[0]; ++i0) {
    if (g.dim > 1) m[0] = (last == 0) ? static_cast<int>(i0) : signed_mode(static_cast<int>(i0), n);
    else m[0] = static_cast<int>(i0);  // dim 1: axis 0 is the halved axis
    for (std::size_t i1 = 0; i1 < shape[1]; ++i1) {
      if (g.dim > 1) m[1] = (last == 1) ? static_cast<int>(i1) : signed_mode(static_cast<int>(i1), n);
      for (std::size_t i2 = 0; i2 < shape[2]; ++i2, ++flat) {
        if (g.dim > 2) m[2] = static_cast<int>(i2);
        fn(flat, m);
      }
    }
  }
}

// Visits every sample with its physical coordinates.
template <class F>
inline void for_each_sample_point(const Grid& g, F&& fn) {
  const auto shape = g.sample_shape();
  const double h = g.spacing();
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t flat = 0;
  for (std::size_t i0 = 0; i0 < shape[0]; ++i0) {
    x[0] = h * static_cast<double>(i0);
    for (std::size_t i1 = 0; i1 < shape[1]; ++i1) {
      x[1] = h * static_cast<double>(i1);
      for (std::size_t i2 = 0; i2 < shape[2]; ++i2, ++flat) {
        x[2] = h * static_cast<double>(i2);
        fn(flat, x);
      }
    }
  }
}

inline double mode_abs_k(const Grid& g, const std::array<int, 3>& m) {
  double s = 0.0;
  for (int j = 0; j < g.dim; ++j) s += static_cast<double>(m[static_cast<std::size_t>(j)]) * m[static_cast<std::size_t>(j)];
  return g.k0() * std::sqrt(s);
}

inline bool mode_is_nyquist(const Grid& g, const std::array<int, 3>& m) {
  const int ny = g.points_per_axis / 2;
  for (int j = 0; j < g.dim; ++j)
    if (m[static_cast<std::size_t>(j)] == ny || m[static_cast<std::size_t>(j)] == -ny) return true;
  return false;
}

}  // namespace besovlab
