#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace besovlab;
using namespace testutil;

TEST_CASE("partition tables have the contracted supports and sum to one") {
  for (int dim : {1, 2, 3}) {
    const Grid g = make_grid(dim, dim == 3 ? 32 : 64, 2 * kPi);
    const DyadicPartition part = build_partition(g);

    double worst = 0.0;
    for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
      const double r = mode_abs_k(g, m);
      const double chi = part.chi[flat];

      // ball multiplier: one inside radius 3/4, zero outside 4/3
      if (r <= 0.75) CHECK(chi == 1.0);
      if (r >= 4.0 / 3.0) CHECK(chi == 0.0);
      CHECK(chi >= 0.0);
      CHECK(chi <= 1.0);

      double total = chi;
      for (int q = 0; q <= part.q_max; ++q) {
        const double scale = std::pow(2.0, q);
        const double phi = part.phi[static_cast<std::size_t>(q)][flat];
        // shell multiplier: supported on [3/4, 8/3] * 2^q, full on [4/3, 3/2] * 2^q
        if (r <= 0.75 * scale || r >= (8.0 / 3.0) * scale) CHECK(phi == 0.0);
        if (r >= (4.0 / 3.0) * scale && r <= 1.5 * scale) CHECK(phi == 1.0);
        CHECK(phi >= 0.0);
        CHECK(phi <= 1.0);
        total += phi;
      }
      worst = std::max(worst, std::abs(total - 1.0));
    });
    CHECK(worst <= 1e-12);
    CHECK(part.residual <= 1e-12);
  }
}

TEST_CASE("cutoff index scales with resolution as expected") {
  CHECK(build_partition(make_grid(1, 8, 2 * kPi)).q_max == 3);
  CHECK(build_partition(make_grid(1, 16, 2 * kPi)).q_max == 4);
  CHECK(build_partition(make_grid(3, 32, 2 * kPi)).q_max == 5);
  CHECK(build_partition(make_grid(3, 64, 2 * kPi)).q_max == 6);
  // Doubling the period doubles kmax's mode count but halves k0.
  CHECK(build_partition(make_grid(1, 64, 4 * kPi)).q_max == 5);
}

TEST_CASE("top shell clears every lattice mode including corners") {
  for (int dim : {1, 2, 3}) {
    const Grid g = make_grid(dim, 16, 2 * kPi);
    const DyadicPartition part = build_partition(g);
    // Above q_max every shell is identically zero on the lattice, so the
    // truncated sum is exact; verify the would-be next shell vanishes: its
    // support starts at 3/4 * 2^{q_max+1} > sqrt(dim) * kmax.
    const double corner = std::sqrt(static_cast<double>(dim)) * g.kmax();
    CHECK(0.75 * std::pow(2.0, part.q_max + 1) > corner);
  }
}

TEST_CASE("partition tolerance handling") {
  const Grid g = make_grid(1, 16, 2 * kPi);
  CHECK_THROWS_AS(build_partition(g, -1e-9), ConfigError);
  CHECK_THROWS_AS(build_partition(g, 0.0), CheckError);  // unattainable by contract
  CHECK_NOTHROW(build_partition(g, 1e-15));
}

TEST_CASE("block decomposition reconstructs the field exactly") {
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, 32, 2 * kPi);
    const DyadicPartition part = build_partition(g);
    Field f = random_samples_field(g, 99 + static_cast<std::uint64_t>(dim));

    Field sum = dyadic_block(part, f, -1);
    for (int q = 0; q <= part.q_max; ++q) oracle_add_inplace(sum, dyadic_block(part, f, q));
    CHECK(l2_diff(sum, f) < 1e-13 * std::max(1.0, l2_norm_plain(f)));
  }
}

TEST_CASE("blocks match an independent multiplier application") {
  const Grid g = make_grid(2, 32, 2 * kPi);
  const DyadicPartition part = build_partition(g);
  Field f = random_samples_field(g, 5);
  for (int q = -1; q <= part.q_max; ++q) {
    Field mine = dyadic_block(part, f, q);
    Field ref = oracle_block(part, f, q);
    CHECK(l2_diff(mine, ref) < 1e-13);
  }
}

TEST_CASE("blocks of far-separated shells are orthogonal") {
  const Grid g = make_grid(1, 64, 2 * kPi);
  const DyadicPartition part = build_partition(g);
  Field f = random_samples_field(g, 17);
  const double norm_f = l2_norm_plain(f);
  for (int p = -1; p <= part.q_max; ++p)
    for (int q = -1; q <= part.q_max; ++q) {
      if (std::abs(p - q) < 2) continue;
      Field pf = dyadic_block(part, dyadic_block(part, f, q), p);
      CHECK(l2_norm_plain(pf) <= 1e-12 * norm_f);
    }
}

TEST_CASE("adjacent shells genuinely overlap") {
  const Grid g = make_grid(1, 64, 2 * kPi);
  const DyadicPartition part = build_partition(g);
  Field f = random_samples_field(g, 18);
  // p = q + 1 share the band [3/4 * 2^{q+1}, 8/3 * 2^q]; the composition
  // must not vanish for generic data.
  Field pf = dyadic_block(part, dyadic_block(part, f, 2), 3);
  CHECK(l2_norm_plain(pf) > 1e-6 * l2_norm_plain(f));
}

TEST_CASE("single mode lands in the shells the tables predict") {
  const Grid g = make_grid(1, 64, 2 * kPi);
  const DyadicPartition part = build_partition(g);
  Field f(g);
  {
    auto s = f.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      s[i] = std::cos(2.0 * x[0]);
    });
  }
  std::size_t idx2 = 0;
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    if (m[0] == 2) idx2 = flat;
  });
  for (int q = -1; q <= part.q_max; ++q) {
    const double table_val = q < 0 ? part.chi[idx2] : part.phi[static_cast<std::size_t>(q)][idx2];
    Field blk = dyadic_block(part, f, q);
    Field want = scaled(f, table_val);
    CHECK(l2_diff(blk, want) < 1e-13);
  }
  // |k| = 2 sits strictly between shells 0 and 1 and misses the ball.
  CHECK(part.chi[idx2] == 0.0);
  const double phi0 = part.phi[0][idx2];
  const double phi1 = part.phi[1][idx2];
  CHECK(phi0 > 0.0);
  CHECK(phi1 > 0.0);
  CHECK(phi0 + phi1 == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("low-pass partial sums agree with summed blocks") {
  const Grid g = make_grid(1, 64, 2 * kPi);
  const DyadicPartition part = build_partition(g);
  Field f = random_samples_field(g, 23);
  for (int p : {0, 1, 3, part.q_max + 1}) {
    Field mine = low_cutoff(part, f, p);
    Field ref = oracle_low_pass(part, f, p);
    CHECK(l2_diff(mine, ref) < 1e-13);
  }
  // S_0 is exactly the ball block.
  CHECK(l2_diff(low_cutoff(part, f, 0), dyadic_block(part, f, -1)) < 1e-14);
}

TEST_CASE("blocks of a constant field") {
  const Grid g = make_grid(2, 16, 2 * kPi);
  const DyadicPartition part = build_partition(g);
  Field f(g);
  {
    auto s = f.overwrite_samples();
    for (auto& v : s) v = 0.7;
  }
  Field ball = dyadic_block(part, f, -1);
  CHECK(l2_diff(ball, f) < 1e-14);
  for (int q = 0; q <= part.q_max; ++q)
    CHECK(l2_norm_plain(dyadic_block(part, f, q)) < 1e-14);
}

TEST_CASE("grid mismatch is rejected") {
  const DyadicPartition part = build_partition(make_grid(1, 32, 2 * kPi));
  Field f(make_grid(1, 64, 2 * kPi));
  CHECK_THROWS_AS(dyadic_block(part, f, 0), ConfigError);
}
