#pragma once

#include <bbmlab/config.hpp>
#include <bbmlab/construction.hpp>
#include <bbmlab/dynamics.hpp>
#include <bbmlab/errors.hpp>
#include <bbmlab/parallel.hpp>
#include <bbmlab/random.hpp>
#include <bbmlab/spaces.hpp>
#include <bbmlab/spectral_function.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace bbm {

enum class SolverKind { PicardSeries, RK4, FixedPoint };
enum class BaseData { Zero, Smooth };

/// Everything a sweep needs. Keyed-text names are given next to each field.
struct InflationConfig {
  double s = -1.0;                                  ///< s
  std::vector<double> thetas{-1.0, 0.0, 2.0};       ///< thetas
  Family family = Family::FourierAmalgam;           ///< family = fl | fa | mo | wa
  double p = 2.0;                                   ///< p
  double q = 2.0;                                   ///< q
  bool homogeneous = false;                         ///< homogeneous
  std::vector<std::int64_t> Ns{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};  ///< Ns
  std::optional<double> r;                          ///< r (default -s/3)
  std::optional<double> eps;                        ///< eps (default -s/2)
  double m = 2.0;                                   ///< m
  SolverKind solver = SolverKind::PicardSeries;     ///< solver = picard | rk4 | fixed_point
  std::size_t K = 5;                                ///< K
  double c_hat = kPicardConstant;                   ///< c_hat
  BaseData base = BaseData::Zero;                   ///< base = zero | smooth
  std::uint64_t seed = 7;                           ///< seed (smooth base profile)
  double amplitude = 1.0;                           ///< amplitude (R = amplitude N^r)
  GridKind grid = GridKind::Torus;                  ///< grid = torus | line
  double h = 0.125;                                 ///< h
  QuadratureSpec quad;                              ///< quad.base_nodes, quad.tol, quad.max_doublings
  double rk4_dt = 1e-3;                             ///< rk4.dt
  std::size_t crosscheck_every = 4;                 ///< crosscheck_every (0 disables)
  double residual_tol = 1e-8;                       ///< residual_tol
  double slope_tol = 0.25;                          ///< slope_tol (relative)
  double dominance_factor = 5.0;                    ///< dominance_factor

  double r_value() const { return r.value_or(-s / 3.0); }
  double eps_value() const { return eps.value_or(-s / 2.0); }

  SpaceSpec space(double regularity) const {
    SpaceSpec spec{family, p, q, regularity, homogeneous};
    spec.validate();
    return spec;
  }

  void validate() const {
    validate_exponents(s, r_value(), eps_value());
    if (thetas.empty()) throw std::invalid_argument("thetas must not be empty");
    if (Ns.empty()) throw std::invalid_argument("N list must not be empty");
    for (std::size_t j = 0; j < Ns.size(); ++j) {
      if (Ns[j] < 2) throw std::invalid_argument("every N must be at least 2");
      if (j > 0 && Ns[j] <= Ns[j - 1]) throw std::invalid_argument("N list must be strictly increasing");
    }
    if (K < 2) throw std::invalid_argument("K must be at least 2");
    if (!(m > 0.0)) throw std::invalid_argument("m must be positive");
    if (amplitude < 0.0) throw std::invalid_argument("amplitude must be nonnegative");
    space(s);
  }

  static const std::set<std::string>& keys() {
    static const std::set<std::string> k{"s",       "thetas",   "family",   "p",         "q",
                                         "homogeneous", "Ns",   "r",        "eps",       "m",
                                         "solver",  "K",        "c_hat",    "base",      "seed",
                                         "amplitude", "grid",   "h",        "quad.base_nodes",
                                         "quad.tol", "quad.max_doublings", "rk4.dt", "crosscheck_every",
                                         "residual_tol", "slope_tol", "dominance_factor"};
    return k;
  }

  static InflationConfig from_keyed(const KeyedConfig& kc) {
    kc.require_known(keys());
    InflationConfig c;
    auto line_of = [&](const std::string& key) { return kc.has(key) ? kc.values().at(key).line : 0; };
    c.s = kc.get_double("s", c.s);
    c.thetas = kc.get_list("thetas", c.thetas);
    const auto fam = kc.get_string("family", "fa");
    if (fam == "fl")
      c.family = Family::FourierLebesgue;
    else if (fam == "fa")
      c.family = Family::FourierAmalgam;
    else if (fam == "mo")
      c.family = Family::Modulation;
    else if (fam == "wa")
      c.family = Family::WienerAmalgam;
    else
      throw ParseError(line_of("family"), "family must be fl, fa, mo or wa");
    c.p = kc.get_double("p", c.p);
    c.q = kc.get_double("q", c.q);
    if (c.family == Family::FourierLebesgue) c.p = c.q;
    c.homogeneous = kc.get_bool("homogeneous", c.homogeneous);
    if (kc.has("Ns")) {
      c.Ns.clear();
      for (double n : kc.get_list("Ns")) {
        if (n != std::floor(n)) throw ParseError(line_of("Ns"), "N values must be integers");
        c.Ns.push_back(static_cast<std::int64_t>(n));
      }
    }
    c.r = kc.get_optional_double("r");
    c.eps = kc.get_optional_double("eps");
    c.m = kc.get_double("m", c.m);
    const auto solver = kc.get_string("solver", "picard");
    if (solver == "picard")
      c.solver = SolverKind::PicardSeries;
    else if (solver == "rk4")
      c.solver = SolverKind::RK4;
    else if (solver == "fixed_point")
      c.solver = SolverKind::FixedPoint;
    else
      throw ParseError(line_of("solver"), "solver must be picard, rk4 or fixed_point");
    c.K = static_cast<std::size_t>(kc.get_int("K", static_cast<long long>(c.K)));
    c.c_hat = kc.get_double("c_hat", c.c_hat);
    const auto base = kc.get_string("base", "zero");
    if (base == "zero")
      c.base = BaseData::Zero;
    else if (base == "smooth")
      c.base = BaseData::Smooth;
    else
      throw ParseError(line_of("base"), "base must be zero or smooth");
    c.seed = static_cast<std::uint64_t>(kc.get_int("seed", static_cast<long long>(c.seed)));
    c.amplitude = kc.get_double("amplitude", c.amplitude);
    const auto grid = kc.get_string("grid", "torus");
    if (grid == "torus")
      c.grid = GridKind::Torus;
    else if (grid == "line")
      c.grid = GridKind::Line;
    else
      throw ParseError(line_of("grid"), "grid must be torus or line");
    c.h = kc.get_double("h", c.h);
    c.quad.base_nodes = static_cast<std::size_t>(kc.get_int("quad.base_nodes", static_cast<long long>(c.quad.base_nodes)));
    c.quad.tol = kc.get_double("quad.tol", c.quad.tol);
    c.quad.max_doublings =
        static_cast<std::size_t>(kc.get_int("quad.max_doublings", static_cast<long long>(c.quad.max_doublings)));
    c.rk4_dt = kc.get_double("rk4.dt", c.rk4_dt);
    c.crosscheck_every =
        static_cast<std::size_t>(kc.get_int("crosscheck_every", static_cast<long long>(c.crosscheck_every)));
    c.residual_tol = kc.get_double("residual_tol", c.residual_tol);
    c.slope_tol = kc.get_double("slope_tol", c.slope_tol);
    c.dominance_factor = kc.get_double("dominance_factor", c.dominance_factor);
    try {
      c.validate();
    } catch (const InfeasibleSchedule&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, e.what());
    }
    return c;
  }

  static InflationConfig parse(std::string_view text) { return from_keyed(KeyedConfig::parse(text)); }

  nlohmann::json to_json() const {
    static constexpr const char* fams[] = {"fl", "fa", "mo", "wa"};
    auto exp = [](double v) -> nlohmann::json {
      if (std::isinf(v)) return "inf";
      return v;
    };
    return {{"s", s},
            {"thetas", thetas},
            {"family", fams[static_cast<int>(family)]},
            {"p", exp(p)},
            {"q", exp(q)},
            {"homogeneous", homogeneous},
            {"Ns", Ns},
            {"r", r_value()},
            {"eps", eps_value()},
            {"m", m},
            {"solver", solver == SolverKind::PicardSeries ? "picard" : solver == SolverKind::RK4 ? "rk4" : "fixed_point"},
            {"K", K},
            {"c_hat", c_hat},
            {"base", base == BaseData::Zero ? "zero" : "smooth"},
            {"seed", seed},
            {"amplitude", amplitude},
            {"grid", grid == GridKind::Torus ? "torus" : "line"},
            {"h", h},
            {"quad.base_nodes", quad.base_nodes},
            {"quad.tol", quad.tol},
            {"quad.max_doublings", quad.max_doublings},
            {"rk4.dt", rk4_dt},
            {"crosscheck_every", crosscheck_every},
            {"residual_tol", residual_tol},
            {"slope_tol", slope_tol},
            {"dominance_factor", dominance_factor}};
  }

  /// Keyed text that parses back to this configuration.
  std::string to_text() const {
    std::ostringstream os;
    os << std::setprecision(17);
    const auto j = to_json();
    for (const auto& [key, value] : j.items()) {
      os << key << " = ";
      if (value.is_array()) {
        for (std::size_t j = 0; j < value.size(); ++j) os << (j ? ", " : "") << value[j].dump();
      } else if (value.is_string()) {
        os << value.get<std::string>();
      } else if (value.is_number_float()) {
        os << value.get<double>();
      } else {
        os << value.dump();
      }
      os << "\n";
    }
    return os.str();
  }
};

/// Display name of the space; on the torus every family reduces to FL^q_s.
inline std::string space_label(const InflationConfig& c) {
  auto num = [](double v) {
    if (std::isinf(v)) return std::string("inf");
    std::ostringstream os;
    os << v;
    return os.str();
  };
  const std::string dot = c.homogeneous ? "homogeneous " : "";
  if (c.grid == GridKind::Torus) return dot + "FL^" + num(c.q) + "_s(T)";
  static constexpr const char* names[] = {"FL", "w", "M", "W"};
  return dot + names[static_cast<int>(c.family)] + "^{" + num(c.p) + "," + num(c.q) + "}_s(R)";
}

namespace detail {

/// On torus grids the four families coincide with FL^q_s (each block holds
/// one integer and every band piece is a single mode), so the cheap
/// coefficient formula is used there.
inline SpaceSpec effective_spec(const InflationConfig& c, double regularity) {
  if (c.grid == GridKind::Torus) return SpaceSpec::fourier_lebesgue(c.q, regularity, c.homogeneous);
  return c.space(regularity);
}

inline double lab_norm(const SpectralFunction& f, const InflationConfig& c, double regularity) {
  return space_norm(f, effective_spec(c, regularity));
}

inline double lab_band1(const SpectralFunction& f, const InflationConfig& c, double regularity) {
  return band_restricted_norm(f, effective_spec(c, regularity), 1);
}

}  // namespace detail

struct InflationRow {
  std::int64_t N = 0;
  double R = 0.0;
  double T = 0.0;
  double dist_s = 0.0;             ///< |u_{0,N} - u0|_{X_s}
  std::vector<double> norms;       ///< |u_N(T)|_{X_theta} per theta
  std::vector<double> witness;     ///< band-1 part of |u_N(T)|_{X_theta} per theta
  double band1 = 0.0;              ///< band-1 part of |u_N(T)|_{X_s}
  double band1_u2 = 0.0;           ///< band-1 part of |U_2[u_{0,N}](T)|_{X_s}
  double u1_norm = 0.0;            ///< |U_1[u_{0,N}](T)|_{X_s}
  double higher_norm = 0.0;        ///< sum_{k=3..K} |U_k[u_{0,N}](T)|_{X_s}
  double tail = 0.0;               ///< FL1 certificate for sum_{k>K}
  double regime = 0.0;             ///< c_hat T |u_{0,N}|_{FL1}
  double residual = 0.0;           ///< solver error estimate
  bool dominance = false;
  ConditionFlags conditions;
  std::optional<double> crosscheck_distance;  ///< FL1 distance to an RK4 run
  std::optional<double> crosscheck_bound;
  std::vector<std::string> flags;

  std::string flag_text() const {
    if (flags.empty()) return "ok";
    std::string out;
    for (const auto& f : flags) out += (out.empty() ? "" : "|") + f;
    return out;
  }
};

inline FrequencyGrid lab_grid(const InflationConfig& c, std::int64_t N) {
  // Room for the K-fold sumset of I_N plus the base profile.
  const std::int64_t cutoff = static_cast<std::int64_t>(c.K) * (N + 1) + 6;
  return c.grid == GridKind::Torus ? FrequencyGrid::torus(cutoff) : FrequencyGrid::line(cutoff, c.h);
}

inline SpectralFunction lab_base(const InflationConfig& c, const FrequencyGrid& grid) {
  if (c.base == BaseData::Zero) return SpectralFunction(grid);
  return smooth_profile(grid, c.seed);
}

/// Final-time RK4 state and a Richardson estimate of its error (step doubling).
inline std::pair<SpectralFunction, double> rk4_with_estimate(const SpectralFunction& data, double T, double dt) {
  const auto fine = integrate_rk4(data, T, dt, {1u << 30, 1e100}).final_state();
  const auto coarse = integrate_rk4(data, T, std::min(2.0 * dt, 0.1), {1u << 30, 1e100}).final_state();
  return {fine, fl1_norm(fine - coarse) / 15.0};
}

/// Builds u_{0,N} = u0 + phi_{0,N}, solves to T and measures one report row.
/// `C` is the constant used in condition (i).
inline InflationRow run_point(const InflationConfig& c, std::int64_t N, double C, bool crosscheck = false) {
  const auto sch = schedule(c.s, N, c.r_value(), c.eps_value());
  InflationRow row;
  row.N = N;
  row.R = c.amplitude * sch.R;
  row.T = sch.T;
  const auto grid = lab_grid(c, N);
  const auto base = lab_base(c, grid);
  const auto data = base + make_phi0N(N, row.R, grid);
  row.dist_s = detail::lab_norm(data - base, c, c.s);

  const double M = fl1_norm(data);
  row.regime = c.c_hat * row.T * M;
  if (c.solver == SolverKind::PicardSeries && row.regime >= 1.0) {
    std::ostringstream os;
    os << "N = " << N << ": c*T*|u0|_FL1 = " << row.regime << " >= 1, Picard series refused";
    throw ConvergenceRegimeError(os.str());
  }
  const auto terms = picard_terms(data, c.K, row.T, c.quad);
  row.tail = row.regime < 1.0 ? picard_tail_bound(M, row.regime, c.K) : std::numeric_limits<double>::infinity();
  row.u1_norm = detail::lab_norm(terms[0].value, c, c.s);
  row.band1_u2 = detail::lab_band1(terms[1].value, c, c.s);
  for (std::size_t k = 2; k < terms.size(); ++k) row.higher_norm += detail::lab_norm(terms[k].value, c, c.s);

  SpectralFunction solution(grid);
  double quad_error = 0.0;
  for (const auto& t : terms) quad_error += t.quad_error;
  switch (c.solver) {
    case SolverKind::PicardSeries:
      for (const auto& t : terms) solution = solution + t.value;
      row.residual = quad_error;
      break;
    case SolverKind::RK4: {
      auto [state, err] = rk4_with_estimate(data, row.T, c.rk4_dt);
      solution = std::move(state);
      row.residual = err;
      break;
    }
    case SolverKind::FixedPoint: {
      FixedPointOptions opts;
      opts.tol = c.residual_tol / 10.0;
      const auto fp = fixed_point_solve(data, row.T, opts);
      solution = fp.value;
      row.residual = fp.changes.back();
      break;
    }
  }

  for (double theta : c.thetas) {
    row.norms.push_back(detail::lab_norm(solution, c, theta));
    row.witness.push_back(detail::lab_band1(solution, c, theta));
  }
  row.band1 = detail::lab_band1(solution, c, c.s);

  const double rest = row.u1_norm + row.higher_norm + row.tail;
  row.dominance = row.band1_u2 >= c.dominance_factor * rest;
  row.conditions = check_conditions(c.s, c.r_value(), c.eps_value(), N, c.m, C);

  if (crosscheck && c.solver != SolverKind::RK4) {
    auto [state, err] = rk4_with_estimate(data, row.T, c.rk4_dt);
    row.crosscheck_distance = fl1_norm(state - solution);
    row.crosscheck_bound = row.tail + quad_error + err + row.residual + 1e-12 * std::max(1.0, M);
    if (*row.crosscheck_distance > *row.crosscheck_bound) row.flags.emplace_back("crosscheck");
  }
  if (!(row.residual <= c.residual_tol)) row.flags.emplace_back("residual");
  if (row.regime >= 1.0) row.flags.emplace_back("outside_series_regime");
  for (const auto& f : row.conditions.failures()) row.flags.push_back("cond_" + f);
  if (!row.dominance) row.flags.emplace_back("no_dominance");
  return row;
}

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
};

/// Least-squares fit of log y against log x; NaN when any y <= 0.
inline SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit out;
  if (x.size() != y.size() || x.size() < 2) return out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] > 0.0) || !(y[j] > 0.0)) return out;
    const double lx = std::log(x[j]), ly = std::log(y[j]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return out;
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  return out;
}

inline bool slope_matches(double measured, double predicted, double tol) {
  return std::isfinite(measured) && std::abs(measured - predicted) <= tol * std::abs(predicted);
}

struct InflationReport {
  InflationConfig config;
  std::vector<InflationRow> rows;
  double C = 0.0;  ///< calibrated constant of condition (i): max dist / (R N^s)
  double predicted_distance_slope = 0.0;
  double predicted_growth_slope = 0.0;
  SlopeFit distance_fit;
  std::vector<SlopeFit> witness_fits;  ///< per theta
  std::vector<SlopeFit> norm_fits;     ///< per theta, full norms
  double witness_identity_error = 0.0;  ///< max |w_theta - <1>^{theta-s} w_s| / w_s
  bool norms_dominate_witness = true;
  std::optional<std::int64_t> n_star;  ///< monotone beyond this N
  std::optional<std::int64_t> n_m;     ///< first N with dist < 1/m and witness > m
  std::string label;

  bool distance_ok() const {
    return slope_matches(distance_fit.slope, predicted_distance_slope, config.slope_tol);
  }
  bool growth_ok() const {
    for (const auto& f : witness_fits)
      if (!slope_matches(f.slope, predicted_growth_slope, config.slope_tol)) return false;
    return !witness_fits.empty();
  }
  bool passed() const { return distance_ok() && growth_ok() && norms_dominate_witness && n_star.has_value(); }

  void write_csv(std::ostream& out) const {
    out << "N,R,T,dist_s";
    for (double th : config.thetas) {
      std::ostringstream name;
      name << th;
      out << ",norm_theta_" << name.str();
    }
    out << ",band1,tail,residual,flags\n";
    out << std::setprecision(12);
    for (const auto& row : rows) {
      out << row.N << "," << row.R << "," << row.T << "," << row.dist_s;
      for (double v : row.norms) out << "," << v;
      out << "," << row.band1 << "," << row.tail << "," << row.residual << "," << row.flag_text() << "\n";
    }
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    auto num = [](double v) -> json {
      if (std::isfinite(v)) return v;
      return nullptr;
    };
    json j;
    j["space"] = label;
    j["config"] = config.to_json();
    j["calibrated_C"] = C;
    j["predicted"] = {{"distance_slope", predicted_distance_slope}, {"growth_slope", predicted_growth_slope}};
    j["distance_slope"] = num(distance_fit.slope);
    j["distance_ok"] = distance_ok();
    json per_theta = json::array();
    for (std::size_t t = 0; t < config.thetas.size(); ++t)
      per_theta.push_back({{"theta", config.thetas[t]},
                           {"witness_slope", num(witness_fits[t].slope)},
                           {"norm_slope", num(norm_fits[t].slope)},
                           {"witness_ok", slope_matches(witness_fits[t].slope, predicted_growth_slope, config.slope_tol)}});
    j["theta"] = per_theta;
    j["growth_ok"] = growth_ok();
    j["witness_identity_error"] = witness_identity_error;
    j["norms_dominate_witness"] = norms_dominate_witness;
    j["N_star"] = n_star ? json(*n_star) : json(nullptr);
    j["N_m"] = n_m ? json(*n_m) : json(nullptr);
    j["passed"] = passed();
    json rows_json = json::array();
    for (const auto& row : rows) {
      json r{{"N", row.N},
             {"R", row.R},
             {"T", row.T},
             {"dist_s", row.dist_s},
             {"norms", row.norms},
             {"witness", row.witness},
             {"band1", row.band1},
             {"band1_U2", row.band1_u2},
             {"U1_norm", row.u1_norm},
             {"higher_norm", row.higher_norm},
             {"tail", num(row.tail)},
             {"regime", row.regime},
             {"residual", row.residual},
             {"dominance", row.dominance},
             {"conditions", {{"i", row.conditions.i}, {"ii", row.conditions.ii}, {"iii", row.conditions.iii},
                             {"iv", row.conditions.iv}, {"v", row.conditions.v}}},
             {"flags", row.flag_text()}};
      if (row.crosscheck_distance)
        r["crosscheck"] = {{"distance", *row.crosscheck_distance}, {"bound", *row.crosscheck_bound}};
      rows_json.push_back(std::move(r));
    }
    j["rows"] = rows_json;
    return j;
  }
};

/// Runs every N (concurrently), then fits slopes and locates N* and N_m.
inline InflationReport run_sweep(const InflationConfig& config) {
  config.validate();
  InflationReport rep;
  rep.config = config;
  rep.label = space_label(config);
  const double r = config.r_value(), eps = config.eps_value();
  rep.predicted_distance_slope = r + config.s;
  rep.predicted_growth_slope = 2.0 * r - eps;

  // Condition (i) uses C = sup_N |phi_{0,N}|_{X_s} / (R N^s), computed on the data alone.
  for (auto N : config.Ns) {
    const auto sch = schedule(config.s, N, r, eps);
    const auto grid = lab_grid(config, N).with_cutoff(N + 2);
    const double R = config.amplitude * sch.R;
    if (R == 0.0) continue;
    const double ratio = detail::lab_norm(make_phi0N(N, R, grid), config, config.s) /
                         (R * std::pow(static_cast<double>(N), config.s));
    rep.C = std::max(rep.C, ratio);
  }

  const std::size_t n = config.Ns.size();
  rep.rows.resize(n);
  parallel_for(n, [&](std::size_t j) {
    const bool cross = config.crosscheck_every > 0 && (j % config.crosscheck_every == 0 || j + 1 == n);
    rep.rows[j] = run_point(config, config.Ns[j], rep.C, cross);
  });

  std::vector<double> xs, dist;
  for (const auto& row : rep.rows) {
    xs.push_back(static_cast<double>(row.N));
    dist.push_back(row.dist_s);
  }
  rep.distance_fit = fit_loglog(xs, dist);
  for (std::size_t t = 0; t < config.thetas.size(); ++t) {
    std::vector<double> w, v;
    for (const auto& row : rep.rows) {
      w.push_back(row.witness[t]);
      v.push_back(row.norms[t]);
      rep.norms_dominate_witness = rep.norms_dominate_witness && row.norms[t] >= row.witness[t] * (1.0 - 1e-12);
      const auto ratio = config.homogeneous ? 1.0 : std::pow(2.0, 0.5 * (config.thetas[t] - config.s));
      if (row.band1 > 0.0)
        rep.witness_identity_error =
            std::max(rep.witness_identity_error, std::abs(row.witness[t] - ratio * row.band1) / (ratio * row.band1));
    }
    rep.witness_fits.push_back(fit_loglog(xs, w));
    rep.norm_fits.push_back(fit_loglog(xs, v));
  }

  // N*: from here on the data distance falls and every witness and norm rises.
  for (std::size_t start = 0; start < n && !rep.n_star; ++start) {
    bool mono = true;
    for (std::size_t j = start + 1; j < n && mono; ++j) {
      const auto& a = rep.rows[j - 1];
      const auto& b = rep.rows[j];
      mono = b.dist_s < a.dist_s;
      for (std::size_t t = 0; t < config.thetas.size() && mono; ++t)
        mono = b.witness[t] > a.witness[t] && b.norms[t] > a.norms[t];
    }
    if (mono && start + 1 < n) rep.n_star = rep.rows[start].N;
  }
  for (const auto& row : rep.rows) {
    const double weakest = *std::min_element(row.witness.begin(), row.witness.end());
    if (row.dist_s < 1.0 / config.m && weakest > config.m) {
      rep.n_m = row.N;
      break;
    }
  }
  return rep;
}

}  // namespace bbm
