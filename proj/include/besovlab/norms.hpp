#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "besovlab/dyadic.hpp"

namespace besovlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Lebesgue exponent spec for a Besov norm: weight s, inner L^p, outer l^r.
struct BesovSpec {
  double s = 0.0;
  double p = 2.0;
  double r = 2.0;
};

inline void validate_lebesgue_exponent(double p) {
  if (!(p >= 1.0)) throw ConfigError("Lebesgue exponent must satisfy p >= 1");
}

namespace detail {

// Pointwise Euclidean magnitude across components, then the grid L^p
// quadrature (exact for p = 2 on resolved trigonometric data, O(h^2)
// otherwise; p = inf is the exact sample max).
inline double lp_of_magnitude(std::span<const Field* const> comps, double p) {
  validate_lebesgue_exponent(p);
  const Grid& g = comps.front()->grid();
  std::vector<std::span<const double>> s;
  s.reserve(comps.size());
  for (const Field* f : comps) {
    if (f->grid() != g) throw ConfigError("norm components live on different grids");
    s.push_back(f->samples());
  }
  const std::size_t count = s.front().size();
  if (p == kInf) {
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      double m2 = 0.0;
      for (const auto& c : s) m2 += c[i] * c[i];
      best = std::max(best, m2);
    }
    return std::sqrt(best);
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < count; ++i)
      for (const auto& c : s) acc += c[i] * c[i];
    return std::sqrt(acc * g.cell_volume());
  }
  for (std::size_t i = 0; i < count; ++i) {
    double m2 = 0.0;
    for (const auto& c : s) m2 += c[i] * c[i];
    acc += std::pow(m2, 0.5 * p);
  }
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

}  // namespace detail

inline double lp_norm(const Field& f, double p) {
  const Field* one[] = {&f};
  return detail::lp_of_magnitude(one, p);
}

inline double lp_norm(std::span<const Field* const> comps, double p) {
  return detail::lp_of_magnitude(comps, p);
}

inline double lp_norm(const VectorField& u, double p) {
  std::vector<const Field*> comps;
  for (int j = 0; j < u.size(); ++j) comps.push_back(&u[j]);
  return detail::lp_of_magnitude(comps, p);
}

// Dyadic Besov norm: ( sum_{q=-1}^{q_max} (2^{qs} ||block_q f||_{L^p})^r )^{1/r},
// with r = inf taking the sup over q. Multi-component overloads measure the
// blocks of all components jointly, so for p = 2 the squared block norm is the
// sum of the component block norms squared.
inline double besov_norm(const DyadicPartition& part, std::span<const Field* const> comps, BesovSpec spec) {
  validate_lebesgue_exponent(spec.p);
  if (!(spec.r >= 1.0)) throw ConfigError("Besov outer exponent must satisfy r >= 1");
  double acc = 0.0;
  double sup = 0.0;
  std::vector<Field> blocks(comps.size());
  std::vector<const Field*> ptrs(comps.size());
  for (int q = -1; q <= part.q_max; ++q) {
    for (std::size_t c = 0; c < comps.size(); ++c) {
      blocks[c] = dyadic_block(part, *comps[c], q);
      ptrs[c] = &blocks[c];
    }
    const double a = std::pow(2.0, q * spec.s) * detail::lp_of_magnitude(ptrs, spec.p);
    if (spec.r == kInf)
      sup = std::max(sup, a);
    else
      acc += std::pow(a, spec.r);
  }
  return spec.r == kInf ? sup : std::pow(acc, 1.0 / spec.r);
}

inline double besov_norm(const DyadicPartition& part, const Field& f, BesovSpec spec) {
  const Field* one[] = {&f};
  return besov_norm(part, std::span<const Field* const>(one), spec);
}

inline double besov_norm(const DyadicPartition& part, const VectorField& u, BesovSpec spec) {
  std::vector<const Field*> comps;
  for (int j = 0; j < u.size(); ++j) comps.push_back(&u[j]);
  return besov_norm(part, std::span<const Field* const>(comps), spec);
}

}  // namespace besovlab
