#include <bbmlab/inflation.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

using namespace bbm;
using Catch::Approx;

namespace {

InflationConfig short_sweep(const std::string& extra = "") {
  return InflationConfig::parse("s = -1\nNs = 16, 32, 64, 128, 256\n" + extra);
}

}  // namespace

TEST_CASE("inflation data on the torus") {
  const auto grid = FrequencyGrid::torus(20);
  const auto f = make_phi0N(10, 2.5, grid);
  CHECK(f.indices().size() == 6);
  for (std::int64_t n : {-11, -10, -9, 9, 10, 11}) CHECK(f.coeff(n) == complex(2.5));
  CHECK(f.coeff(8) == complex(0.0));
  CHECK(fl1_norm(f) == Approx(15.0));
  CHECK(f.is_hermitian());
  CHECK_THROWS_AS(make_phi0N(20, 1.0, grid), SupportOverflow);
  CHECK(make_phi0N(10, 0.0, grid).empty());
}

TEST_CASE("inflation data on a line grid has 17 points per component") {
  const auto grid = FrequencyGrid::line(12, 0.125);
  const auto f = make_phi0N(10, 1.0, grid);
  CHECK(f.indices().size() == 34);
  CHECK(f.coeff(grid.index_of_integer(9)) == complex(1.0));
  CHECK(f.coeff(grid.index_of_integer(9) - 1) == complex(0.0));
}

TEST_CASE("schedule arithmetic") {
  const auto a = schedule(-1.0, 4096);
  CHECK(a.R == Approx(16.0));
  CHECK(a.T == Approx(1.0 / 64));
  CHECK(a.T * a.R == Approx(0.25));
  CHECK(a.T * a.R * a.R == Approx(4.0));
  CHECK(a.distance_slope() == Approx(-2.0 / 3));
  CHECK(a.inflation_slope() == Approx(1.0 / 6));
  const auto b = schedule(-3.0, 16);
  CHECK(b.r == 1.0);
  CHECK(b.eps == 1.5);
}

TEST_CASE("infeasible exponents are refused with the violated condition") {
  auto message = [](double s, double r, double eps) {
    try {
      validate_exponents(s, r, eps);
    } catch (const InfeasibleSchedule& e) {
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  CHECK(message(-1, 1.0 / 3, 0.5) == "accepted");
  CHECK(message(0.5, 0.1, 0.15).find("s < 0") != std::string::npos);
  CHECK(message(-1, 1.2, 1.5).find("r + s < 0") != std::string::npos);
  CHECK(message(-1, 0.4, 0.3).find("-eps + r < 0") != std::string::npos);   // eps <= r
  CHECK(message(-1, 0.4, 0.4).find("-eps + r < 0") != std::string::npos);
  CHECK(message(-1, 0.2, 0.5).find("-eps + 2r > 0") != std::string::npos);
  CHECK(message(-1, -0.2, -0.1).find("eps > 0") != std::string::npos);
  CHECK_THROWS_AS(schedule(-1.0, 64, 0.5, 0.3), InfeasibleSchedule);
}

TEST_CASE("condition flags") {
  const auto big = check_conditions(-1, 1.0 / 3, 0.5, 4096, 2.0, 3.0);
  CHECK(big.distance_bound == Approx(3.0 * 16 / 4096));
  CHECK(big.i);
  CHECK(big.ii);
  CHECK(big.iv == big.ii);
  CHECK(big.v);
  const auto small = check_conditions(-1, 1.0 / 3, 0.5, 16, 10.0, 3.0);
  CHECK(small.tr == Approx(std::pow(16.0, -1.0 / 6)));
  CHECK_FALSE(small.iii);
  CHECK_FALSE(small.all());
  CHECK(small.failures().size() >= 2);
}

TEST_CASE("config parsing") {
  const auto c = InflationConfig::parse(
      "# comment\ns = -2\nthetas = -2, 0, 5\nfamily = wa\nq = 4\nhomogeneous = yes\nNs = 16, 64\n"
      "solver = rk4\ngrid = line\nh = 0.25\nquad.tol = 1e-9\n");
  CHECK(c.s == -2.0);
  CHECK(c.thetas == std::vector<double>{-2, 0, 5});
  CHECK(c.family == Family::WienerAmalgam);
  CHECK(c.homogeneous);
  CHECK(c.Ns == std::vector<std::int64_t>{16, 64});
  CHECK(c.r_value() == Approx(2.0 / 3));
  CHECK(c.eps_value() == Approx(1.0));
  CHECK(c.solver == SolverKind::RK4);
  CHECK(c.grid == GridKind::Line);
  CHECK(c.quad.tol == 1e-9);
  // the resolved text parses back to the same configuration
  CHECK(InflationConfig::parse(c.to_text()).to_json() == c.to_json());
}

TEST_CASE("config errors name the line") {
  auto line_of = [](const std::string& text) -> long {
    try {
      InflationConfig::parse(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.line());
    }
    return -1;
  };
  CHECK(line_of("s = -1\nbogus = 3\n") == 2);
  CHECK(line_of("s = -1\ns = -2\n") == 2);
  CHECK(line_of("s -1\n") == 1);
  CHECK(line_of("\n\nfamily = xx\n") == 3);
  CHECK(line_of("s = abc\n") == 1);
  CHECK(line_of("Ns = 16, 3.5\n") == 1);
  CHECK(line_of("K = 2.5\n") == 1);
  CHECK(line_of("Ns =\n") == 0);
  CHECK(line_of("Ns = 64, 32\n") == 0);
  CHECK_THROWS_AS(InflationConfig::parse("s = -1\nr = 0.9\n"), InfeasibleSchedule);
}

TEST_CASE("space labels") {
  CHECK(space_label(InflationConfig{}) == "FL^2_s(T)");
  auto c = InflationConfig::parse("family = wa\nq = 4\ngrid = line\n");
  CHECK(space_label(c) == "W^{2,4}_s(R)");
}

TEST_CASE("one point of the default schedule") {
  InflationConfig c;
  const auto row = run_point(c, 256, 2.5, true);
  const double expected = std::sqrt(6.0) * std::pow(256.0, c.r_value() + c.s);
  CHECK(row.dist_s == Approx(expected).epsilon(2e-3));
  CHECK(row.R == Approx(std::pow(256.0, 1.0 / 3)));
  CHECK(row.T == Approx(1.0 / 16));
  CHECK(row.residual <= c.residual_tol);
  REQUIRE(row.crosscheck_distance.has_value());
  CHECK(*row.crosscheck_distance <= *row.crosscheck_bound);
  // the witness is the band-1 part of the full norm
  for (std::size_t t = 0; t < c.thetas.size(); ++t) {
    CHECK(row.witness[t] <= row.norms[t]);
    CHECK(row.witness[t] == Approx(std::pow(2.0, (c.thetas[t] - c.s) / 2) * row.band1).epsilon(1e-12));
  }
  CHECK(row.band1 / (row.R * row.R * row.T) > 0.5);
}

TEST_CASE("dominance of the second iterate at the largest N") {
  InflationConfig c;
  const auto row = run_point(c, 4096, 2.5);
  CHECK(row.dominance);
  CHECK(row.band1_u2 >= 5 * (row.u1_norm + row.higher_norm + row.tail));
}

TEST_CASE("picard solver refused outside its regime") {
  auto c = short_sweep("c_hat = 10\n");
  CHECK_THROWS_AS(run_point(c, 64, 2.5), ConvergenceRegimeError);
  c.solver = SolverKind::RK4;
  const auto row = run_point(c, 64, 2.5);
  CHECK(row.flag_text().find("outside_series_regime") != std::string::npos);
}

TEST_CASE("solvers give the same row") {
  auto c = short_sweep();
  const auto a = run_point(c, 32, 2.5);
  c.solver = SolverKind::RK4;
  const auto b = run_point(c, 32, 2.5);
  c.solver = SolverKind::FixedPoint;
  const auto d = run_point(c, 32, 2.5);
  for (std::size_t t = 0; t < c.thetas.size(); ++t) {
    CHECK(d.norms[t] == Approx(b.norms[t]).epsilon(1e-8));
    // For theta <= 0 the torus FL^2_theta norm is below FL1, where the
    // truncated series is within its tail certificate.
    if (c.thetas[t] <= 0.0) CHECK(std::abs(b.norms[t] - a.norms[t]) <= a.tail + a.residual + b.residual);
  }
}

TEST_CASE("log-log fits") {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * std::pow(v, -0.4));
  const auto f = fit_loglog(x, y);
  CHECK(f.slope == Approx(-0.4));
  CHECK(std::exp(f.intercept) == Approx(3.0));
  y[2] = 0.0;
  CHECK(std::isnan(fit_loglog(x, y).slope));
  CHECK(slope_matches(0.16, 1.0 / 6, 0.25));
  CHECK_FALSE(slope_matches(0.1, 1.0 / 6, 0.25));
}

TEST_CASE("short sweep report") {
  const auto rep = run_sweep(short_sweep());
  REQUIRE(rep.rows.size() == 5);
  for (std::size_t j = 1; j < rep.rows.size(); ++j) CHECK(rep.rows[j].N > rep.rows[j - 1].N);
  CHECK(rep.distance_ok());
  CHECK(rep.witness_identity_error <= 1e-12);
  CHECK(rep.norms_dominate_witness);
  CHECK(rep.C >= 2.2);
  CHECK(rep.C <= 2.7);
  std::ostringstream csv;
  rep.write_csv(csv);
  const auto text = csv.str();
  CHECK(text.rfind("N,R,T,dist_s,norm_theta_-1,norm_theta_0,norm_theta_2,band1,tail,residual,flags\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  const auto j = rep.to_json();
  CHECK(j["rows"].size() == 5);
  CHECK(j["space"] == "FL^2_s(T)");
}

TEST_CASE("sweeps are deterministic") {
  const auto cfg = short_sweep("base = smooth\n");
  std::ostringstream a, b;
  run_sweep(cfg).write_csv(a);
  run_sweep(cfg).write_csv(b);
  CHECK(a.str() == b.str());
}
