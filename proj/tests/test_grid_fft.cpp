#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <set>

#include "helpers.hpp"

using namespace besovlab;
using namespace testutil;

TEST_CASE("grid construction validates its inputs") {
  CHECK_THROWS_AS(make_grid(0, 16, 2 * kPi), ConfigError);
  CHECK_THROWS_AS(make_grid(4, 16, 2 * kPi), ConfigError);
  CHECK_THROWS_AS(make_grid(2, 12, 2 * kPi), ConfigError);  // not a power of two
  CHECK_THROWS_AS(make_grid(2, 4, 2 * kPi), ConfigError);   // too small
  CHECK_THROWS_AS(make_grid(2, 16, 0.0), ConfigError);
  CHECK_THROWS_AS(make_grid(2, 16, -1.0), ConfigError);

  const Grid g = make_grid(3, 16, 2 * kPi);
  CHECK(g.point_count() == 16 * 16 * 16);
  CHECK(g.spectral_count() == 16 * 16 * 9);
  CHECK(g.k0() == Catch::Approx(1.0));
  CHECK(g.kmax() == Catch::Approx(8.0));
  CHECK(g.cell_volume() == Catch::Approx(std::pow(2 * kPi / 16, 3)));
}

TEST_CASE("signed mode indexing follows FFT ordering") {
  CHECK(signed_mode(0, 8) == 0);
  CHECK(signed_mode(3, 8) == 3);
  CHECK(signed_mode(4, 8) == -4);
  CHECK(signed_mode(7, 8) == -1);
}

TEST_CASE("spectral mode iteration covers each slot exactly once") {
  const Grid g = make_grid(2, 16, 2 * kPi);
  std::set<std::size_t> seen;
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    CHECK(seen.insert(flat).second);
    CHECK(std::abs(m[0]) <= 8);
    CHECK(std::abs(m[1]) <= 8);
    CHECK(m[2] == 0);
  });
  CHECK(seen.size() == static_cast<std::size_t>(g.spectral_count()));
  CHECK(*seen.rbegin() == static_cast<std::size_t>(g.spectral_count()) - 1);
}

TEST_CASE("transform roundtrip is lossless at machine precision") {
  for (int dim : {1, 2, 3}) {
    const Grid g = make_grid(dim, dim == 3 ? 16 : 64, 2 * kPi);
    Field f = random_samples_field(g, 11 + static_cast<std::uint64_t>(dim));
    std::vector<double> before(f.samples().begin(), f.samples().end());
    (void)f.spectrum();            // force a forward transform
    Field copy(g);
    {
      auto spec = copy.overwrite_spectrum();
      auto src = f.spectrum();
      for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = src[i];
    }
    auto back = copy.samples();    // force the inverse
    double worst = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i)
      worst = std::max(worst, std::abs(back[i] - before[i]));
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("Fourier coefficients follow the 1/N convention") {
  const Grid g = make_grid(1, 64, 2 * kPi);
  Field f(g);
  {
    auto s = f.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      s[i] = std::cos(x[0]) + 2.0 * std::sin(3.0 * x[0]);
    });
  }
  auto c = f.spectrum();
  // cos x -> 1/2 at mode 1; 2 sin 3x -> -i at mode 3.
  std::size_t idx1 = 0, idx3 = 0;
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    if (m[0] == 1) idx1 = flat;
    if (m[0] == 3) idx3 = flat;
  });
  CHECK(std::abs(c[idx1] - std::complex<double>(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(c[idx3] - std::complex<double>(0.0, -1.0)) < 1e-14);
  double stray = 0.0;
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    if (m[0] != 1 && m[0] != 3) stray = std::max(stray, std::abs(c[flat]));
  });
  CHECK(stray < 1e-14);
}

TEST_CASE("Parseval ties the sample and spectral sides together") {
  const Grid g = make_grid(2, 32, 2 * kPi);
  Field f = random_samples_field(g, 1234);
  const double sample_side = l2_norm_plain(f);

  // Spectral side with explicit Hermitian double counting on the half grid.
  const int n = g.points_per_axis;
  auto c = f.spectrum();
  double acc = 0.0;
  for_each_spectral_mode(g, [&](std::size_t flat, const std::array<int, 3>& m) {
    const int last = m[static_cast<std::size_t>(g.dim - 1)];
    const double w = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    acc += w * std::norm(c[flat]);
  });
  const double spectral_side = std::sqrt(acc * g.volume());
  CHECK(sample_side == Catch::Approx(spectral_side).epsilon(1e-12));
}

TEST_CASE("spectral derivatives are exact on resolved trig polynomials") {
  const Grid g = make_grid(2, 32, 2 * kPi);
  Field f(g), want_dx(g), want_dy(g);
  {
    auto s = f.overwrite_samples();
    auto dx = want_dx.overwrite_samples();
    auto dy = want_dy.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      s[i] = std::sin(2.0 * x[0]) * std::cos(x[1]);
      dx[i] = 2.0 * std::cos(2.0 * x[0]) * std::cos(x[1]);
      dy[i] = -std::sin(2.0 * x[0]) * std::sin(x[1]);
    });
  }
  CHECK(l2_diff(partial_derivative(f, 0), want_dx) < 1e-12);
  CHECK(l2_diff(partial_derivative(f, 1), want_dy) < 1e-12);
}

TEST_CASE("derivatives kill the Nyquist mode instead of corrupting it") {
  const Grid g = make_grid(1, 16, 2 * kPi);
  Field f(g);
  {
    auto s = f.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      s[i] = std::cos(8.0 * x[0]);  // pure Nyquist content
    });
  }
  Field d = partial_derivative(f, 0);
  CHECK(l2_norm_plain(d) < 1e-13);
}

TEST_CASE("divergence and curl compose correctly") {
  const Grid g = make_grid(3, 16, 2 * kPi);
  VectorField u(g);
  for (int j = 0; j < 3; ++j)
    u[j] = trig_sum_field(g, 100 + static_cast<std::uint64_t>(j), 1, 4);

  // div curl = 0 and curl grad = 0, both at machine precision.
  VectorField w = curl(u);
  Field div_w = divergence(w);
  CHECK(l2_norm_plain(div_w) < 1e-11 * std::max(1.0, l2_norm_plain(w[0])));

  Field phi = trig_sum_field(g, 7, 1, 4);
  VectorField gp = spectral_gradient(phi);
  VectorField cg = curl(gp);
  for (int j = 0; j < 3; ++j) CHECK(l2_norm_plain(cg[j]) < 1e-11);
}

TEST_CASE("dealiased products drop the top third of the spectrum") {
  const Grid g = make_grid(1, 32, 2 * kPi);
  Field a(g), b(g);
  {
    auto sa = a.overwrite_samples();
    auto sb = b.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      sa[i] = std::cos(7.0 * x[0]);
      sb[i] = std::cos(8.0 * x[0]);
    });
  }
  Field prod = times(a, b);  // cos7 cos8 = (cos x + cos 15x)/2, cutoff floor(32/3) = 10
  Field want(g);
  {
    auto s = want.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      s[i] = 0.5 * std::cos(x[0]);
    });
  }
  CHECK(l2_diff(prod, want) < 1e-13);

  // The raw product keeps the high mode.
  Field raw = times(a, b, false);
  Field want_raw(g);
  {
    auto s = want_raw.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      s[i] = 0.5 * (std::cos(x[0]) + std::cos(15.0 * x[0]));
    });
  }
  CHECK(l2_diff(raw, want_raw) < 1e-13);
}

TEST_CASE("dealias box is alias-free for quadratic products") {
  // Two fields supported in the box produce a raw product whose box modes
  // are exact, so P(fg) built on the grid equals the continuum truncation.
  const Grid g = make_grid(1, 32, 2 * kPi);
  const int cut = 10;
  Field a(g), b(g);
  {
    auto sa = a.overwrite_samples();
    auto sb = b.overwrite_samples();
    for_each_sample_point(g, [&](std::size_t i, const std::array<double, 3>& x) {
      sa[i] = std::cos(cut * x[0]);
      sb[i] = std::sin(cut * x[0]);
    });
  }
  // cos(10x) sin(10x) = sin(20x)/2: entirely outside the box, so the
  // dealiased product must vanish identically.
  Field prod = times(a, b);
  CHECK(l2_norm_plain(prod) < 1e-13);
}

TEST_CASE("field caches stay coherent through mutation") {
  const Grid g = make_grid(1, 32, 2 * kPi);
  Field f = trig_sum_field(g, 21, 1, 5);
  (void)f.spectrum();
  {
    auto s = f.mutable_samples();
    for (auto& v : s) v *= 2.0;
  }
  Field twice = scaled(trig_sum_field(g, 21, 1, 5), 2.0);
  CHECK(l2_diff(f, twice) < 1e-13);

  // Spectrum mutation invalidates samples.
  Field h = trig_sum_field(g, 22, 1, 5);
  (void)h.samples();
  {
    auto spec = h.mutable_spectrum();
    for (auto& z : spec) z = 0.0;
  }
  CHECK(l2_norm_plain(h) == 0.0);
}
