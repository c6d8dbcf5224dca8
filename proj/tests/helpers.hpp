#pragma once

// Test-side utilities, deliberately written against the library's contracts
// rather than its internals: oracle block filters apply the partition tables
// with their own spectrum loops, products are plain sample loops, and the
// reference RNG is a separate generator from the one in the library.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "besovlab/besovlab.hpp"

namespace testutil {

using namespace besovlab;

inline constexpr double kPi = std::numbers::pi;

// xorshift-style deterministic RNG, unrelated to the library's hash synthesis.
struct TestRng {
  std::uint64_t s;
  explicit TestRng(std::uint64_t seed) : s(seed ^ 0x9e3779b97f4a7c15ull) {
    next();
    next();
  }
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  double uniform() {  // in (-1, 1)
    return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
  }
};

// Random real field built directly in sample space (full spectrum content).
inline Field random_samples_field(const Grid& g, std::uint64_t seed) {
  Field f(g);
  auto s = f.overwrite_samples();
  TestRng rng(seed);
  for (auto& v : s) v = rng.uniform();
  return f;
}

// Random band-limited field built by the test: a sum of a few explicit
// cosine modes, evaluated pointwise.
inline Field trig_sum_field(const Grid& g, std::uint64_t seed, int k_lo, int k_hi, int n_modes = 6) {
  TestRng rng(seed);
  std::vector<std::array<int, 3>> modes;
  std::vector<double> amps, phases;
  int guard = 0;
  while (static_cast<int>(modes.size()) < n_modes && guard++ < 1000) {
    std::array<int, 3> m{0, 0, 0};
    for (int j = 0; j < g.dim; ++j)
      m[static_cast<std::size_t>(j)] =
          static_cast<int>(rng.next() % static_cast<std::uint64_t>(2 * k_hi + 1)) - k_hi;
    const double r = std::sqrt(static_cast<double>(m[0]) * m[0] + static_cast<double>(m[1]) * m[1] +
                               static_cast<double>(m[2]) * m[2]);
    if (r < k_lo || r > k_hi) continue;
    modes.push_back(m);
    amps.push_back(rng.uniform());
    phases.push_back(kPi * rng.uniform());
  }
  Field f(g);
  auto s = f.overwrite_samples();
  const double k0 = g.k0();
  for_each_sample_point(g, [&](std::size_t flat, const std::array<double, 3>& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      double phase = phases[i];
      for (int j = 0; j < g.dim; ++j)
        phase += k0 * modes[i][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      v += amps[i] * std::cos(phase);
    }
    s[flat] = v;
  });
  return f;
}

// L2 norm of a sample difference, done with a bare loop.
inline double l2_diff(const Field& a, const Field& b) {
  auto as = a.samples();
  auto bs = b.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < as.size(); ++i) {
    const double d = as[i] - bs[i];
    acc += d * d;
  }
  return std::sqrt(acc * a.grid().cell_volume());
}

inline double l2_norm_plain(const Field& a) {
  auto as = a.samples();
  double acc = 0.0;
  for (double v : as) acc += v * v;
  return std::sqrt(acc * a.grid().cell_volume());
}

// Independent block filter: multiplies the spectrum by a stored table with
// an explicit loop (no operators.hpp involvement).
inline Field oracle_apply_table(const Field& f, const std::vector<double>& table) {
  Field out(f.grid());
  auto in = f.spectrum();
  auto o = out.overwrite_spectrum();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = in[i] * table[i];
  return out;
}

inline Field oracle_block(const DyadicPartition& part, const Field& f, int q) {
  return oracle_apply_table(f, q < 0 ? part.chi : part.phi[static_cast<std::size_t>(q)]);
}

// Cumulative low-pass through shell p-1 (the classical partial sum S_p).
inline Field oracle_low_pass(const DyadicPartition& part, const Field& f, int p) {
  Field acc = oracle_block(part, f, -1);
  for (int j = 0; j <= std::min(p - 1, part.q_max); ++j) {
    Field blk = oracle_block(part, f, j);
    auto a = acc.mutable_samples();
    auto b = blk.samples();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
  return acc;
}

// Plain pointwise product, no dealiasing.
inline Field oracle_times(const Field& a, const Field& b) {
  Field out(a.grid());
  auto as = a.samples();
  auto bs = b.samples();
  auto o = out.overwrite_samples();
  for (std::size_t i = 0; i < as.size(); ++i) o[i] = as[i] * bs[i];
  return out;
}

inline void oracle_add_inplace(Field& acc, const Field& x, double c = 1.0) {
  auto a = acc.mutable_samples();
  auto b = x.samples();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

// Independent dealias projector built from the documented cutoff rule.
inline Field oracle_dealias(const Field& f) {
  const Grid& g = f.grid();
  const int cut = g.points_per_axis / 3;
  Field out(g);
  auto in = f.spectrum();
  auto o = out.overwrite_spectrum();
  for (std::size_t i = 0; i < in.size(); ++i) o[i] = in[i];
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    for (int j = 0; j < g.dim; ++j)
      if (std::abs(m[static_cast<std::size_t>(j)]) > cut) {
        o[flat] = 0.0;
        return;
      }
  });
  return out;
}

// Independent L^p norm of the joint magnitude of several fields.
inline double oracle_lp(const std::vector<const Field*>& comps, double p) {
  const Grid& g = comps.front()->grid();
  std::vector<std::span<const double>> spans;
  for (const Field* f : comps) spans.push_back(f->samples());
  double acc = 0.0;
  double worst = 0.0;
  const std::size_t n = spans.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    double mag2 = 0.0;
    for (const auto& s : spans) mag2 += s[i] * s[i];
    if (p == besovlab::kInf)
      worst = std::max(worst, mag2);
    else
      acc += std::pow(mag2, 0.5 * p);
  }
  if (p == besovlab::kInf) return std::sqrt(worst);
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

}  // namespace testutil
