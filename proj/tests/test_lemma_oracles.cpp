#include <bbmlab/oracles.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace bbm;
using Catch::Approx;

TEST_CASE("resonance function closed form") {
  CHECK(phase_resonance(0.0, 0.0) == 0.0);
  for (double x : {0.3, 2.0, 17.5}) CHECK(phase_resonance(x, -x) == Approx(0.0).margin(1e-15));
  const double p = phase_resonance(10.0, -9.0);
  CHECK(std::abs(p) >= 0.5);
  CHECK(std::abs(p) <= 2.0);
  // against the symbol directly
  for (double a : {-3.2, 0.7, 11.0})
    for (double b : {-9.0, 0.25, 4.0})
      CHECK(phase_resonance(a, b) == Approx(-phi(a + b) + phi(a) + phi(b)).margin(1e-15));
}

TEST_CASE("majorant recursions") {
  const auto avg = majorant_sequence(1.0, 1.0, 20, MajorantVariant::Averaged);
  for (double b : avg) CHECK(b == Approx(1.0));
  const auto plain = majorant_sequence(1.0, 1.0, 20, MajorantVariant::Plain);
  CHECK(plain[1] == 1.0);
  CHECK(plain[2] == 2.0);
  CHECK(plain[3] == 5.0);
  CHECK(plain[4] == 14.0);
  for (std::size_t k = 1; k <= 20; ++k)
    CHECK(plain[k - 1] <= std::pow(2 * std::numbers::pi * std::numbers::pi / 3, static_cast<double>(k - 1)));
  for (double b : majorant_sequence(2.0, 0.0, 10)) CHECK(b == 0.0);
  CHECK_THROWS_AS(majorant_sequence(1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("identity oracles pass at 1e-12") {
  for (const auto& r : {check_phase_identity(1), check_group_law(1), check_norm_preservation(1),
                        check_partition_sums(1), check_plancherel(1)}) {
    INFO(r.to_json().dump());
    CHECK(r.passed);
    CHECK(r.tolerance == 1e-12);
  }
}

TEST_CASE("inequality oracles") {
  const auto bil = check_bilinear_bound(4);
  INFO(bil.to_json().dump());
  CHECK(bil.passed);
  CHECK(bil.constants.at("max_constant") <= 1 + 1e-8);
  const auto emb = check_embeddings(4);
  INFO(emb.to_json().dump());
  CHECK(emb.passed);
  CHECK(check_majorants(4).passed);
  CHECK(check_picard_upper_bound(4).passed);
}

TEST_CASE("support of the iterates does not depend on N") {
  const auto r = check_support_growth(2);
  INFO(r.to_json().dump());
  CHECK(r.passed);
  CHECK(r.constants.at("measure_k1") == 6.0);
  CHECK(r.constants.at("measure_k2") <= 15.0);
  for (int k = 1; k <= 4; ++k) CHECK(r.constants.at("measure_k" + std::to_string(k)) <= std::pow(kSupportConstant, k));
}

TEST_CASE("upper bound envelopes along the schedule") {
  const auto r = check_d0(SpectralFunction(FrequencyGrid::torus(4)), dyadic_range(16, 256), -1.0,
                          SpaceSpec::fourier_amalgam(2, 2, -1));
  INFO(r.to_json().dump());
  CHECK(r.passed);
  CHECK(r.constants.at("item3_at_t0") == 0.0);
  // distance / (R N^s) stays within 20%
  CHECK(r.constants.at("item1_growth") <= 1.2);
}

TEST_CASE("lower bound oracles") {
  const auto conv = check_convolution_minorant();
  CHECK(conv.passed);
  CHECK(conv.constants.at("count_-1") == 4.0);
  CHECK(conv.constants.at("count_0") == 6.0);
  CHECK(conv.constants.at("count_1") == 4.0);

  const auto phase = check_resonant_phase();
  INFO(phase.to_json().dump());
  CHECK(phase.passed);
  CHECK(phase.constants.at("min_re_over_T") >= 0.5);

  const auto d2 = check_d2({32, 1024}, -1.0, SpaceSpec::fourier_amalgam(2, 2, -1));
  INFO(d2.to_json().dump());
  CHECK(d2.passed);
  CHECK(d2.constants.at("kappa_max") <= 2 * d2.constants.at("kappa_min"));
}

TEST_CASE("a fixed seed replays identical constants") {
  const auto a = check_bilinear_bound(42, 30);
  const auto b = check_bilinear_bound(42, 30);
  CHECK(a.constants == b.constants);
  CHECK(a.to_json() == b.to_json());
  const auto c = check_bilinear_bound(43, 30);
  CHECK(c.constants != a.constants);
}

TEST_CASE("witness spectra serialize for replay") {
  Rng rng(5);
  const auto f = random_band_limited(FrequencyGrid::line(3, 0.25), 2.0, rng);
  const auto back = spectral_from_json(json::parse(spectral_to_json(f).dump()));
  CHECK(back.grid() == f.grid());
  CHECK(fl1_norm(back - f) == 0.0);
}

TEST_CASE("suite selection") {
  CHECK(parse_suite("identities") == Suite::Identities);
  CHECK(parse_suite("lower") == Suite::Lower);
  CHECK_THROWS_AS(parse_suite("everything"), std::invalid_argument);
  const auto ids = run_suite(Suite::Identities, 9);
  CHECK(ids.size() == 5);
  for (const auto& r : ids) {
    CHECK(r.passed);
    CHECK(r.seed == 9);
  }
}
