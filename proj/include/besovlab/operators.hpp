#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "besovlab/field.hpp"

namespace besovlab {

// ---- spectral multipliers ----

inline Field apply_multiplier(const Field& f, std::span<const double> table) {
  Field out(f.grid());
  auto in = f.spectrum();
  auto dst = out.overwrite_spectrum();
  for (std::size_t i = 0; i < in.size(); ++i) dst[i] = in[i] * table[i];
  return out;
}

// d/dx_axis as the multiplier i*k_axis. Nyquist planes carry no usable sign
// information in the real half-spectrum storage, so they are zeroed.
inline Field partial_derivative(const Field& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim) throw ConfigError("derivative axis out of range");
  Field out(g);
  auto in = f.spectrum();
  auto dst = out.overwrite_spectrum();
  const double k0 = g.k0();
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    if (mode_is_nyquist(g, m)) {
      dst[flat] = 0.0;
      return;
    }
    const double k = k0 * static_cast<double>(m[static_cast<std::size_t>(axis)]);
    dst[flat] = std::complex<double>(0.0, k) * in[flat];
  });
  return out;
}

inline VectorField spectral_gradient(const Field& f) {
  VectorField out(f.grid());
  for (int j = 0; j < f.grid().dim; ++j) out[j] = partial_derivative(f, j);
  return out;
}

inline Field divergence(const VectorField& u) {
  const Grid& g = u.grid();
  Field out(g);
  auto dst = out.overwrite_spectrum();
  const double k0 = g.k0();
  for (int j = 0; j < g.dim; ++j) {
    auto in = u[j].spectrum();
    for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
      if (j == 0) dst[flat] = 0.0;
      if (mode_is_nyquist(g, m)) return;
      const double k = k0 * static_cast<double>(m[static_cast<std::size_t>(j)]);
      dst[flat] += std::complex<double>(0.0, k) * in[flat];
    });
  }
  return out;
}

inline VectorField curl(const VectorField& u) {
  const Grid& g = u.grid();
  if (g.dim != 3) throw ConfigError("curl needs a 3-D field");
  VectorField w(g);
  // w_i = d_j u_k - d_k u_j for (i,j,k) cyclic
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    Field a = partial_derivative(u[k], j);
    Field b = partial_derivative(u[j], k);
    auto as = a.mutable_spectrum();
    auto bs = b.spectrum();
    for (std::size_t idx = 0; idx < as.size(); ++idx) as[idx] -= bs[idx];
    w[i] = std::move(a);
  }
  return w;
}

inline Field curl_2d(const VectorField& u) {
  const Grid& g = u.grid();
  if (g.dim != 2) throw ConfigError("curl_2d needs a 2-D field");
  Field a = partial_derivative(u[1], 0);
  Field b = partial_derivative(u[0], 1);
  auto as = a.mutable_spectrum();
  auto bs = b.spectrum();
  for (std::size_t i = 0; i < as.size(); ++i) as[i] -= bs[i];
  return a;
}

// ---- dealiasing ----

// Two-thirds rule, applied per axis: modes with any |m_j| > floor(n/3) are
// zeroed. For power-of-two n the surviving box satisfies n - 2b > b, so a
// product of two box-limited fields never wraps back into the box and the
// truncated product is free of aliasing error.
inline int dealias_cutoff(const Grid& g) { return g.points_per_axis / 3; }

inline bool mode_in_dealias_box(const Grid& g, const std::array<int, 3>& m) {
  const int b = dealias_cutoff(g);
  for (int j = 0; j < g.dim; ++j)
    if (std::abs(m[static_cast<std::size_t>(j)]) > b) return false;
  return true;
}

inline void dealias_inplace(Field& f) {
  const Grid& g = f.grid();
  auto spec = f.mutable_spectrum();
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    if (!mode_in_dealias_box(g, m)) spec[flat] = 0.0;
  });
}

inline Field dealiased(Field f) {
  dealias_inplace(f);
  return f;
}

// ---- pointwise algebra on samples ----

inline Field times(const Field& a, const Field& b, bool dealias = true) {
  Field out(a.grid());
  auto as = a.samples();
  auto bs = b.samples();
  auto dst = out.overwrite_samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = as[i] * bs[i];
  if (dealias) dealias_inplace(out);
  return out;
}

inline void axpy(Field& y, double alpha, const Field& x) {
  auto ys = y.mutable_samples();
  auto xs = x.samples();
  for (std::size_t i = 0; i < ys.size(); ++i) ys[i] += alpha * xs[i];
}

inline Field scaled(const Field& f, double alpha) {
  Field out(f.grid());
  auto src = f.samples();
  auto dst = out.overwrite_samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = alpha * src[i];
  return out;
}

inline Field sub(const Field& a, const Field& b) {
  Field out(a.grid());
  auto as = a.samples();
  auto bs = b.samples();
  auto dst = out.overwrite_samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = as[i] - bs[i];
  return out;
}

inline double inner_product(const Field& a, const Field& b) {
  auto as = a.samples();
  auto bs = b.samples();
  double s = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) s += as[i] * bs[i];
  return s * a.grid().cell_volume();
}

inline double sup_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

inline double min_value(const Field& f) {
  auto s = f.samples();
  double m = s[0];
  for (double v : s) m = std::min(m, v);
  return m;
}

// Pointwise Euclidean magnitude sup over the components of a vector field.
inline double sup_magnitude(const VectorField& u) {
  std::vector<std::span<const double>> comp;
  for (int j = 0; j < u.size(); ++j) comp.push_back(u[j].samples());
  double best = 0.0;
  for (std::size_t i = 0; i < comp[0].size(); ++i) {
    double s = 0.0;
    for (const auto& c : comp) s += c[i] * c[i];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace besovlab
