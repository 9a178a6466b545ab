// bbmlab: norms, Picard iterates, inflation sweeps, oracle runs and RK4
// trajectories from the command line. Every file written gets a manifest
// next to it; `bbmlab replay <manifest>` reruns the same resolved config.

#include <bbmlab/bbmlab.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bbm::SpectralFunction load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return bbm::read_spectrum(in);
  } catch (const bbm::ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::ofstream open_out(const std::string& path) {
  if (const auto dir = fs::path(path).parent_path(); !dir.empty()) fs::create_directories(dir);
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Writes `<prefix>.manifest.json`. `config` is exactly what replay consumes.
void write_manifest(const std::string& prefix, const std::string& sub, const json& config, std::uint64_t seed,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    double seconds) {
  json m{{"subcommand", sub},
         {"config", config},
         {"seed", seed},
         {"version", bbm::kVersion},
         {"inputs", inputs},
         {"outputs", outputs},
         {"started_utc", utc_now()},
         {"wall_clock_seconds", seconds},
         {"threads", bbm::thread_count()}};
  open_out(prefix + ".manifest.json") << m.dump(2) << "\n";
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- norm

int run_norm(const std::string& input, const std::string& spec_text) {
  const auto f = load_spectrum(input);
  const auto spec = bbm::SpaceSpec::parse(spec_text);
  std::cout << std::setprecision(15) << bbm::space_norm(f, spec) << "\n";
  return kPass;
}

// ---- picard

int run_picard(const json& cfg, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto N = cfg.at("N").get<std::int64_t>();
  const auto R = cfg.at("R").get<double>();
  const auto k = cfg.at("k").get<std::size_t>();
  const auto T = cfg.at("T").get<double>();
  if (N < 1) throw UsageError("--N must be positive");
  if (k < 1) throw UsageError("--k must be at least 1");
  std::vector<bbm::SpaceSpec> specs;
  for (const auto& s : cfg.at("specs")) specs.push_back(bbm::SpaceSpec::parse(s.get<std::string>()));
  bbm::QuadratureSpec quad;
  quad.base_nodes = cfg.at("quad_nodes").get<std::size_t>();
  quad.tol = cfg.at("quad_tol").get<double>();

  const std::int64_t cutoff = static_cast<std::int64_t>(k) * (N + 1) + 2;
  const auto grid = cfg.at("grid") == "line" ? bbm::FrequencyGrid::line(cutoff, cfg.at("h").get<double>())
                                             : bbm::FrequencyGrid::torus(cutoff);
  const auto u0 = bbm::make_phi0N(N, R, grid);
  const auto result = bbm::picard_iterate(u0, k, T, quad);

  const std::string spectrum_path = out + ".spectrum.csv";
  const std::string norms_path = out + ".norms.csv";
  {
    auto f = open_out(spectrum_path);
    bbm::write_spectrum(f, result.value);
  }
  std::ostringstream table;
  table << "spec,norm\n" << std::setprecision(15);
  table << "fl:1:1:0," << bbm::fl1_norm(result.value) << "\n";
  for (const auto& spec : specs) table << spec.to_string() << "," << bbm::space_norm(result.value, spec) << "\n";
  open_out(norms_path) << table.str();
  std::cout << table.str() << "quad_error," << std::setprecision(3) << result.quad_error << "\n";
  write_manifest(out, "picard", cfg, 0, {}, {spectrum_path, norms_path}, elapsed(t0));
  return kPass;
}

// ---- sweep

int run_sweep(const std::string& config_text, const std::string& source, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto config = bbm::InflationConfig::parse(config_text);
  const auto rep = bbm::run_sweep(config);

  const std::string csv_path = out + ".csv";
  const std::string json_path = out + ".json";
  {
    auto f = open_out(csv_path);
    rep.write_csv(f);
  }
  open_out(json_path) << rep.to_json().dump(2) << "\n";

  std::cout << "space " << rep.label << "  C = " << rep.C << "\n";
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "distance slope " << rep.distance_fit.slope << " (predicted " << rep.predicted_distance_slope << ") "
            << (rep.distance_ok() ? "ok" : "FAIL") << "\n";
  for (std::size_t t = 0; t < config.thetas.size(); ++t) {
    const bool ok = bbm::slope_matches(rep.witness_fits[t].slope, rep.predicted_growth_slope, config.slope_tol);
    std::cout << "theta " << config.thetas[t] << ": growth slope " << rep.witness_fits[t].slope << " (predicted "
              << rep.predicted_growth_slope << ") " << (ok ? "ok" : "FAIL") << "  full norm slope "
              << rep.norm_fits[t].slope << "\n";
  }
  std::cout << "N* = " << (rep.n_star ? std::to_string(*rep.n_star) : "none")
            << "  N_m = " << (rep.n_m ? std::to_string(*rep.n_m) : "none") << "\n";
  std::cout << (rep.passed() ? "PASS" : "FAIL") << "\n";
  write_manifest(out, "sweep", {{"text", config.to_text()}, {"resolved", config.to_json()}}, config.seed,
                 source.empty() ? std::vector<std::string>{} : std::vector<std::string>{source},
                 {csv_path, json_path}, elapsed(t0));
  return rep.passed() ? kPass : kFail;
}

// ---- verify

int run_verify(const json& cfg, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto suite = bbm::parse_suite(cfg.at("suite").get<std::string>());
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto reports = bbm::run_suite(suite, seed);
  bool all = true;
  json rows = json::array();
  std::ostringstream csv;
  csv << "id,pass,constants,seed\n" << std::setprecision(10);
  for (const auto& r : reports) {
    all = all && r.passed;
    rows.push_back(r.to_json());
    std::string consts;
    for (const auto& [name, value] : r.constants) {
      std::ostringstream one;
      one << std::setprecision(10) << name << "=" << value;
      consts += (consts.empty() ? "" : ";") + one.str();
    }
    csv << r.id << "," << (r.passed ? "true" : "false") << ",\"" << consts << "\"," << r.seed << "\n";
    std::cout << (r.passed ? "pass " : "FAIL ") << r.id;
    if (!r.note.empty()) std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  if (!out.empty()) {
    open_out(out + ".json") << rows.dump(2) << "\n";
    open_out(out + ".csv") << csv.str();
    write_manifest(out, "verify", cfg, seed, {}, {out + ".json", out + ".csv"}, elapsed(t0));
  }
  std::cout << reports.size() << " oracles, " << (all ? "all passed" : "failures present") << "\n";
  return all ? kPass : kFail;
}

// ---- simulate

int run_simulate(const json& cfg, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto input = cfg.at("input").get<std::string>();
  const auto T = cfg.at("T").get<double>();
  const auto dt = cfg.at("dt").get<double>();
  const auto s = cfg.at("s").get<double>();
  const auto every = cfg.at("every").get<std::size_t>();
  if (every == 0) throw UsageError("--every must be positive");
  const auto u0 = load_spectrum(input);
  bbm::Rk4Options opts;
  opts.store_every = every;
  const auto traj = bbm::integrate_rk4(u0, T, dt, opts);

  std::ostringstream csv;
  csv << "t,E,fl1,hs\n" << std::setprecision(17);
  const double e0 = bbm::energy(u0);
  double drift = 0.0;
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const auto& u = traj.states[j];
    const double e = bbm::energy(u);
    if (e0 > 0.0) drift = std::max(drift, std::abs(e - e0) / e0);
    csv << traj.times[j] << "," << e << "," << bbm::fl1_norm(u) << "," << bbm::sobolev_norm(u, s) << "\n";
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    open_out(out + ".csv") << csv.str();
    write_manifest(out, "simulate", cfg, 0, {input}, {out + ".csv"}, elapsed(t0));
  }
  std::cerr << "relative energy drift " << std::scientific << std::setprecision(3) << drift << "\n";
  const double limit = cfg.value("max_drift", -1.0);
  return limit >= 0.0 && drift > limit ? kFail : kPass;
}

// ---- replay

int run_replay(const std::string& manifest_path, std::string out) {
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw UsageError(manifest_path + ": " + e.what());
  }
  const auto sub = m.at("subcommand").get<std::string>();
  const auto& cfg = m.at("config");
  if (out.empty()) {
    // Default: same prefix as the original run.
    out = manifest_path;
    const std::string tail = ".manifest.json";
    if (out.ends_with(tail)) out.erase(out.size() - tail.size());
  }
  if (sub == "picard") return run_picard(cfg, out);
  if (sub == "sweep") return run_sweep(cfg.at("text").get<std::string>(), "", out);
  if (sub == "verify") return run_verify(cfg, out);
  if (sub == "simulate") return run_simulate(cfg, out);
  throw UsageError("manifest names unknown subcommand '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bbmlab: numerical lab for norm inflation in the BBM equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bbm::kVersion);

  std::string input, spec = "fa:2:2:-1", out, config_path, suite = "all", manifest;
  std::int64_t N = 16;
  double R = 1.0, T = 0.0, dt = 1e-3, s = 1.0, quad_tol = 1e-10, h = 0.125, max_drift = -1.0;
  std::size_t k = 2, quad_nodes = 8, every = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> specs;
  std::string grid = "torus";

  auto* norm = app.add_subcommand("norm", "norm of a spectrum file (xi,re,im CSV)");
  norm->add_option("input", input, "spectrum CSV")->required();
  norm->add_option("--spec", spec, "family:p:q:s[:hom]")->capture_default_str();

  auto* picard = app.add_subcommand("picard", "k-th Picard iterate of phi_{0,N} at time T");
  picard->add_option("--N", N, "frequency of the data")->required();
  picard->add_option("--R", R, "amplitude")->capture_default_str();
  picard->add_option("--k", k, "iterate index")->capture_default_str();
  picard->add_option("--T", T, "time")->required();
  picard->add_option("--spec", specs, "extra norms to report (repeatable)");
  picard->add_option("--grid", grid, "torus | line")->check(CLI::IsMember({"torus", "line"}))->capture_default_str();
  picard->add_option("--spacing", h, "line grid spacing h")->capture_default_str();
  picard->add_option("--quad-nodes", quad_nodes, "Gauss nodes per panel")->capture_default_str();
  picard->add_option("--quad-tol", quad_tol, "panel doubling tolerance")->capture_default_str();
  picard->add_option("--out", out, "output prefix")->required();

  auto* sweep = app.add_subcommand("sweep", "inflation sweep over N from a keyed config");
  sweep->add_option("config", config_path, "keyed text config")->required();
  sweep->add_option("--out", out, "output prefix")->required();

  auto* verify = app.add_subcommand("verify", "run the lemma oracles");
  verify->add_option("--suite", suite, "identities | inequalities | lower | all")
      ->check(CLI::IsMember({"identities", "inequalities", "lower", "all"}))
      ->capture_default_str();
  verify->add_option("--seed", seed, "oracle seed")->capture_default_str();
  verify->add_option("--out", out, "report prefix (JSON + CSV)");

  auto* simulate = app.add_subcommand("simulate", "RK4 trajectory of a spectrum file");
  simulate->add_option("--input", input, "spectrum CSV")->required();
  simulate->add_option("--T", T, "final time")->required();
  simulate->add_option("--dt", dt, "step")->capture_default_str();
  simulate->add_option("--s", s, "Sobolev index of the hs column")->capture_default_str();
  simulate->add_option("--every", every, "keep every n-th step")->capture_default_str();
  simulate->add_option("--max-drift", max_drift, "fail if relative energy drift exceeds this");
  simulate->add_option("--out", out, "output prefix (stdout if omitted)");

  auto* replay = app.add_subcommand("replay", "rerun from a manifest");
  replay->add_option("manifest", manifest, "manifest JSON")->required();
  replay->add_option("--out", out, "output prefix (default: the original one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*norm) return run_norm(input, spec);
    if (*picard) {
      if (specs.empty()) specs.push_back("fa:2:2:-1");
      return run_picard({{"N", N},
                         {"R", R},
                         {"k", k},
                         {"T", T},
                         {"specs", specs},
                         {"grid", grid},
                         {"h", h},
                         {"quad_nodes", quad_nodes},
                         {"quad_tol", quad_tol}},
                        out);
    }
    if (*sweep) return run_sweep(read_file(config_path), config_path, out);
    if (*verify) return run_verify({{"suite", suite}, {"seed", seed}}, out);
    if (*simulate) {
      json cfg{{"input", input}, {"T", T}, {"dt", dt}, {"s", s}, {"every", every}};
      if (max_drift >= 0.0) cfg["max_drift"] = max_drift;
      return run_simulate(cfg, out);
    }
    if (*replay) return run_replay(manifest, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const bbm::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const bbm::InfeasibleSchedule& e) {
    std::cerr << "infeasible schedule: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "malformed manifest: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
