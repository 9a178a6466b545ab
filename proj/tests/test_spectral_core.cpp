#include <bbmlab/construction.hpp>
#include <bbmlab/dynamics.hpp>
#include <bbmlab/random.hpp>
#include <bbmlab/spectral_function.hpp>
#include <bbmlab/spectrum_io.hpp>

#include <catch_amalgamated.hpp>

#include <numbers>
#include <sstream>

using namespace bbm;
using Catch::Approx;

namespace {

// Brute-force convolution on dense coefficient arrays, independent of the
// library's sparse and FFT paths.
std::vector<complex> brute_convolution(const SpectralFunction& f, const SpectralFunction& g) {
  const auto& grid = f.grid();
  const auto m = grid.max_index();
  const auto a = f.to_dense();
  const auto b = g.to_dense();
  std::vector<complex> out(a.size());
  for (std::int64_t x = -m; x <= m; ++x) {
    complex acc = 0.0;
    for (std::int64_t y = -m; y <= m; ++y) {
      const auto z = x - y;
      if (z < -m || z > m) continue;
      acc += a[static_cast<std::size_t>(y + m)] * b[static_cast<std::size_t>(z + m)];
    }
    out[static_cast<std::size_t>(x + m)] = acc * grid.weight();
  }
  return out;
}

}  // namespace

TEST_CASE("torus grid holds the integers up to the cutoff") {
  const auto g = FrequencyGrid::torus(5);
  CHECK(g.size() == 11);
  CHECK(g.contains(-5));
  CHECK_FALSE(g.contains(6));
  CHECK(g.weight() == 1.0);
  CHECK(g.block_of(3) == 3);
}

TEST_CASE("line grid blocks follow n + (-1/2, 1/2]") {
  const auto g = FrequencyGrid::line(4, 0.125);
  CHECK(g.max_index() == 32);
  CHECK(g.frequency(9) == Approx(1.125));
  CHECK(g.block_of(4) == 0);   // 0.5 belongs to block 0
  CHECK(g.block_of(5) == 1);   // 0.625
  CHECK(g.block_of(-4) == -1); // -0.5 belongs to block -1
  CHECK_THROWS_AS(FrequencyGrid::line(4, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(FrequencyGrid::torus(0), std::invalid_argument);
}

TEST_CASE("convolution of the I_10 indicator counts ordered pairs") {
  const auto grid = FrequencyGrid::torus(30);
  const auto chi = make_phi0N(10, 1.0, grid);
  const auto c = convolve(chi, chi);
  // pairs from {+-9, +-10, +-11} summing to n
  auto count = [](int n) {
    int k = 0;
    for (int a : {-11, -10, -9, 9, 10, 11})
      for (int b : {-11, -10, -9, 9, 10, 11}) k += (a + b == n);
    return k;
  };
  CHECK(c.coeff(0).real() == count(0));
  CHECK(c.coeff(1).real() == count(1));
  CHECK(count(0) == 6);
  CHECK(count(1) == 4);
}

TEST_CASE("delta at zero is the convolution identity") {
  const auto grid = FrequencyGrid::torus(12);
  Rng rng(3);
  const auto g = random_band_limited(grid, 5.0, rng);
  const auto d = SpectralFunction::delta(grid, 0);
  const auto c = convolve(d, g);
  CHECK(fl1_norm(c - g) == 0.0);
}

TEST_CASE("convolution matches a dense brute force on both grid kinds") {
  Rng rng(11);
  for (auto grid : {FrequencyGrid::torus(20), FrequencyGrid::line(6, 0.25)}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto f = random_band_limited(grid, 2.5, rng);
      const auto g = random_band_limited(grid, 3.0, rng);
      const auto fast = convolve(f, g).to_dense();
      const auto ref = brute_convolution(f, g);
      double err = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        err = std::max(err, std::abs(fast[j] - ref[j]));
        scale = std::max(scale, std::abs(ref[j]));
      }
      CHECK(err <= 1e-12 * scale);
    }
  }
}

TEST_CASE("fft convolution agrees with the direct sum") {
  Rng rng(5);
  const auto grid = FrequencyGrid::torus(64);
  const auto f = random_band_limited(grid, 30.0, rng);
  const auto g = random_band_limited(grid, 30.0, rng);
  const auto a = convolve(f, g);
  const auto b = convolve_fft(f, g).value;
  CHECK(fl1_norm(a - b) <= 1e-10 * fl1_norm(a));
}

TEST_CASE("convolution is commutative, bilinear and respects the sumset") {
  Rng rng(8);
  const auto grid = FrequencyGrid::torus(40);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_band_limited(grid, 6.0, rng);
    const auto g = random_band_limited(grid, 9.0, rng);
    const auto h = random_band_limited(grid, 4.0, rng);
    const auto fg = convolve(f, g);
    CHECK(fl1_norm(fg - convolve(g, f)) <= 1e-12 * fl1_norm(fg));
    const complex a(0.3, -1.2);
    const auto lhs = convolve(a * f + h, g);
    const auto rhs = a * fg + convolve(h, g);
    CHECK(fl1_norm(lhs - rhs) <= 1e-12 * fl1_norm(lhs));
    const auto [lo, hi] = *fg.support();
    CHECK(lo >= -15);
    CHECK(hi <= 15);
  }
}

TEST_CASE("convolution past the cutoff is refused unless truncation is requested") {
  const auto grid = FrequencyGrid::torus(12);
  const auto chi = make_phi0N(10, 1.0, grid);
  CHECK_THROWS_AS(convolve(chi, chi), SupportOverflow);
  const auto t = convolve_truncating(chi, chi);
  CHECK(t.truncated_l1 > 0.0);
  CHECK(t.value.coeff(0).real() == 6.0);
}

TEST_CASE("different grids do not mix") {
  const auto f = SpectralFunction::delta(FrequencyGrid::torus(4), 1);
  const auto g = SpectralFunction::delta(FrequencyGrid::torus(5), 1);
  CHECK_THROWS_AS(convolve(f, g), GridMismatch);
  CHECK_THROWS_AS(f + g, GridMismatch);
}

TEST_CASE("multipliers act pointwise") {
  const auto grid = FrequencyGrid::torus(6);
  const auto d1 = SpectralFunction::delta(grid, 1);
  CHECK(apply_multiplier(d1, [](double) { return complex(1.0); }).coeff(1) == complex(1.0));
  CHECK(apply_multiplier(d1, [](double xi) { return complex(phi(xi)); }).coeff(1) == complex(0.5));
  CHECK(apply_multiplier(SpectralFunction::delta(grid, 0), [](double xi) { return complex(phi(xi)); }).empty());

  Rng rng(2);
  const auto f = random_band_limited(grid, 6.0, rng);
  auto m1 = [](double xi) { return complex(1.0 + xi * xi, xi); };
  auto m2 = [](double xi) { return std::polar(1.0, xi / 3.0); };
  const auto twice = apply_multiplier(apply_multiplier(f, m1), m2);
  const auto once = apply_multiplier(f, [&](double xi) { return m1(xi) * m2(xi); });
  CHECK(fl1_norm(twice - once) <= 1e-14 * fl1_norm(once));
}

TEST_CASE("support measure counts grid points above the threshold") {
  const auto torus = FrequencyGrid::torus(30);
  CHECK(support_measure(make_phi0N(10, 1.0, torus), 0.0) == 6.0);
  CHECK(support_measure(SpectralFunction(torus), 0.0) == 0.0);
  const auto line = FrequencyGrid::line(30, 0.125);
  // two components of 17 points each, times h
  CHECK(support_measure(make_phi0N(10, 1.0, line), 0.0) == Approx(34 * 0.125));
  const auto u2 = picard_iterate(make_phi0N(10, 1.0, torus), 2, 0.3).value;
  CHECK(support_measure(u2, 1e-14) <= 15.0);
  CHECK(support_measure(u2, 1e-14) >= support_measure(u2, 1e-3));
  CHECK_THROWS_AS(support_measure(u2, -1.0), std::invalid_argument);
}

TEST_CASE("physical samples of single modes") {
  const auto grid = FrequencyGrid::torus(4);
  const std::size_t n = 32;
  const auto one = to_physical(SpectralFunction::delta(grid, 0), n);
  for (const auto& v : one.values) CHECK(std::abs(v - complex(1.0)) < 1e-14);
  const auto wave = to_physical(SpectralFunction::delta(grid, 1), n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    CHECK(std::abs(wave.values[j] - std::polar(1.0, x)) < 1e-13);
  }
  CHECK_THROWS_AS(to_physical(SpectralFunction::delta(grid, 0), 17), Undersampling);
}

TEST_CASE("hermitian data synthesizes to real samples and Plancherel holds") {
  Rng rng(17);
  for (auto grid : {FrequencyGrid::torus(25), FrequencyGrid::line(5, 0.125)}) {
    const auto f = random_band_limited(grid, 4.0, rng, true);
    REQUIRE(f.is_hermitian());
    const auto s = to_physical(f, 4 * static_cast<std::size_t>(grid.size()));
    for (const auto& v : s.values) CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v)));
    CHECK(s.l2_norm() == Approx(l2_norm(f)).epsilon(1e-12));
  }
}

TEST_CASE("spectrum files round-trip") {
  Rng rng(4);
  const auto grid = FrequencyGrid::line(3, 0.125);
  const auto f = random_band_limited(grid, 2.0, rng);
  std::stringstream io;
  write_spectrum(io, f);
  const auto back = read_spectrum(io, grid);
  CHECK(fl1_norm(back - f) == 0.0);
}

TEST_CASE("malformed spectrum files report the line") {
  auto fails_at = [](const std::string& text, std::size_t line) {
    std::istringstream in(text);
    try {
      read_spectrum(in);
    } catch (const ParseError& e) {
      return e.line() == line;
    }
    return false;
  };
  CHECK(fails_at("xi,re\n", 1));
  CHECK(fails_at("xi,re,im\n0,1,0\n1,x,0\n", 3));
  CHECK(fails_at("xi,re,im\n1,1,0\n0,1,0\n", 3));   // not increasing
  CHECK(fails_at("xi,re,im\n0,1\n", 2));
  CHECK(fails_at("xi,re,im\n0,nan,0\n", 2));
  CHECK(fails_at("", 1));
  std::istringstream off("xi,re,im\n0.3,1,0\n");
  CHECK_THROWS_AS(read_spectrum(off, FrequencyGrid::line(2, 0.125)), ParseError);
}

TEST_CASE("inferred grid: torus for integer rows, line otherwise") {
  std::istringstream a("xi,re,im\n-2,1,0\n3,0,1\n");
  const auto f = read_spectrum(a);
  CHECK(f.grid().is_torus());
  CHECK(f.grid().cutoff() == 3);
  std::istringstream b("xi,re,im\n0.125,1,0\n");
  CHECK_FALSE(read_spectrum(b).grid().is_torus());
}
