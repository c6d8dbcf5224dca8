#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "besovlab/operators.hpp"

namespace besovlab {

// Dyadic (Littlewood-Paley) partition of unity on the wavenumber lattice.
//
// A smooth radial bump chi equals 1 on the ball r <= 3/4 and vanishes for
// r >= 4/3; the shell function phi(r) = chi(r/2) - chi(r) is supported in
// 3/4 <= r <= 8/3. Then
//   chi(|k|) + sum_{q=0..Q} phi(2^-q |k|)
// telescopes to chi(2^-(Q+1) |k|), which is identically 1 once
// (3/4) 2^(Q+1) exceeds the largest lattice radius, so the tables below sum
// to one at every stored mode, not just inside the axis-aligned ball.

inline double smooth_step(double t) {
  // C^infinity ramp: 0 for t <= 0, 1 for t >= 1, strictly monotone between.
  auto g = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double a = g(t);
  const double b = g(1.0 - t);
  return a / (a + b);
}

inline double ball_profile(double r) {
  // 1 on [0, 3/4], 0 on [4/3, inf)
  constexpr double inner = 0.75;
  constexpr double outer = 4.0 / 3.0;
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  return smooth_step((outer - r) / (outer - inner));
}

inline double shell_profile(double r) { return ball_profile(0.5 * r) - ball_profile(r); }

struct DyadicPartition {
  Grid grid;
  int q_max = 0;       // last shell kept; every shell above it vanishes on the lattice
  double tol = 0.0;    // residual tolerance the build was checked against
  double residual = 0.0;  // max |1 - sum of tables| over the lattice
  std::vector<double> chi;                 // ball block multiplier, q = -1
  std::vector<std::vector<double>> phi;    // shell multipliers, q = 0..q_max

  std::span<const double> block_table(int q) const {
    if (q == -1) return chi;
    if (q < -1 || q > q_max) throw ConfigError("block index out of range: " + std::to_string(q));
    return phi[static_cast<std::size_t>(q)];
  }
};

inline DyadicPartition build_partition(const Grid& grid, double tol = 1e-12) {
  if (tol < 0.0 || !std::isfinite(tol)) throw ConfigError("partition tolerance must be nonnegative");

  DyadicPartition part;
  part.grid = grid;
  part.tol = tol;

  int q_max = 0;
  while (0.75 * std::pow(2.0, q_max) <= grid.kmax()) ++q_max;
  part.q_max = q_max;

  const std::size_t sc = grid.spectral_count();
  part.chi.assign(sc, 0.0);
  part.phi.assign(static_cast<std::size_t>(q_max) + 1, std::vector<double>(sc, 0.0));

  double worst = 0.0;
  for_each_spectral_mode(grid, [&](std::size_t flat, const std::array<int, 3>& m) {
    const double r = mode_abs_k(grid, m);
    double sum = ball_profile(r);
    part.chi[flat] = sum;
    for (int q = 0; q <= q_max; ++q) {
      const double v = shell_profile(std::ldexp(r, -q));
      part.phi[static_cast<std::size_t>(q)][flat] = v;
      sum += v;
    }
    worst = std::max(worst, std::abs(1.0 - sum));
  });
  part.residual = worst;
  // A zero tolerance is treated as unattainable: exactness is an accident of
  // the telescoping table construction, not a promise.
  if (tol == 0.0)
    throw CheckError("partition tolerance 0 is unattainable; measured residual " +
                     std::to_string(worst));
  if (worst > tol)
    throw CheckError("dyadic partition residual " + std::to_string(worst) + " exceeds tolerance " +
                     std::to_string(tol));
  return part;
}

inline Field dyadic_block(const DyadicPartition& part, const Field& f, int q) {
  if (f.grid() != part.grid) throw ConfigError("field grid does not match partition grid");
  return apply_multiplier(f, part.block_table(q));
}

// Low-frequency cutoff S_q f = sum_{p <= q-1} block_p f. S_0 is the ball
// block; indices past the last shell reproduce f itself on this lattice.
inline Field low_cutoff(const DyadicPartition& part, const Field& f, int q) {
  if (f.grid() != part.grid) throw ConfigError("field grid does not match partition grid");
  if (q < 0) throw ConfigError("low cutoff index must be >= 0");
  std::vector<double> table(part.chi);
  const int top = std::min(q - 1, part.q_max);
  for (int p = 0; p <= top; ++p) {
    const auto& t = part.phi[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < table.size(); ++i) table[i] += t[i];
  }
  return apply_multiplier(f, table);
}

}  // namespace besovlab
