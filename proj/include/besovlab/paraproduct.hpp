#pragma once

#include <vector>

#include "besovlab/dyadic.hpp"

namespace besovlab {

// Bony decomposition pieces. All products are pointwise on the grid and the
// result is dealiased once at the end (the truncation commutes with the sum).

// T_f g = sum_{q >= 1} S_{q-1} f . block_q g. The q = 0 term has S_{-1} = 0
// and is skipped; the ball block of g only ever appears through the remainder.
inline Field paraproduct(const DyadicPartition& part, const Field& f, const Field& g, bool dealias = true) {
  if (f.grid() != part.grid || g.grid() != part.grid) throw ConfigError("paraproduct grids do not match partition");
  Field out(part.grid);
  auto acc = out.overwrite_samples();

  // running cumulative multiplier for S_{q-1} f
  std::vector<double> cum(part.grid.spectral_count(), 0.0);
  for (int q = 1; q <= part.q_max; ++q) {
    const auto prev = part.block_table(q - 2);  // q=1 adds the ball block
    for (std::size_t i = 0; i < cum.size(); ++i) cum[i] += prev[i];
    Field lo = apply_multiplier(f, cum);
    Field hi = dyadic_block(part, g, q);
    auto ls = lo.samples();
    auto hs = hi.samples();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += ls[i] * hs[i];
  }
  if (dealias) dealias_inplace(out);
  return out;
}

// R(f, g) = sum_q block_q f . (block_{q-1} + block_q + block_{q+1}) g with
// out-of-range neighbor blocks treated as zero.
inline Field remainder(const DyadicPartition& part, const Field& f, const Field& g, bool dealias = true) {
  if (f.grid() != part.grid || g.grid() != part.grid) throw ConfigError("remainder grids do not match partition");
  Field out(part.grid);
  auto acc = out.overwrite_samples();

  std::vector<double> near(part.grid.spectral_count());
  for (int q = -1; q <= part.q_max; ++q) {
    std::fill(near.begin(), near.end(), 0.0);
    for (int p = q - 1; p <= q + 1; ++p) {
      if (p < -1 || p > part.q_max) continue;
      const auto t = part.block_table(p);
      for (std::size_t i = 0; i < near.size(); ++i) near[i] += t[i];
    }
    Field fq = dyadic_block(part, f, q);
    Field gn = apply_multiplier(g, near);
    auto fs = fq.samples();
    auto gs = gn.samples();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fs[i] * gs[i];
  }
  if (dealias) dealias_inplace(out);
  return out;
}

// [f, block_q] g = f . block_q g - block_q (f g).
inline Field commutator_block(const DyadicPartition& part, const Field& f, const Field& g, int q,
                              bool dealias = true) {
  Field fg = times(f, g, dealias);
  Field a = times(f, dyadic_block(part, g, q), dealias);
  Field b = dyadic_block(part, fg, q);
  auto as = a.mutable_samples();
  auto bs = b.samples();
  for (std::size_t i = 0; i < as.size(); ++i) as[i] -= bs[i];
  return a;
}

// Advective bracket sum_j [u_j, block_q] w_j, typically with w = grad(f) so
// the result is [u, block_q] . grad f.
inline Field commutator_dot(const DyadicPartition& part, const VectorField& u, const VectorField& w, int q,
                            bool dealias = true) {
  Field out(part.grid);
  auto acc = out.overwrite_samples();
  for (int j = 0; j < u.size(); ++j) {
    Field term = commutator_block(part, u[j], w[j], q, dealias);
    auto ts = term.samples();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += ts[i];
  }
  return out;
}

}  // namespace besovlab
