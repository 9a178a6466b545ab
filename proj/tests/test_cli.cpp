// Drives the bbmlab executable end to end in a scratch directory.

#include <bbmlab/construction.hpp>
#include <bbmlab/dynamics.hpp>
#include <bbmlab/random.hpp>
#include <bbmlab/spaces.hpp>
#include <bbmlab/spectrum_io.hpp>

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace bbm;
using Catch::Approx;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("bbmlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const std::string cmd = "cd '" + scratch().string() + "' && '" + BBMLAB_CLI + "' " + args + " 2>&1";
  Run r{0, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void write(const std::string& name, const std::string& text) { std::ofstream(scratch() / name) << text; }

std::string slurp(const std::string& name) {
  std::ifstream in(scratch() / name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string configs(const std::string& name) { return std::string(BBMLAB_CONFIGS) + "/" + name; }

}  // namespace

TEST_CASE("norm prints 15 significant digits") {
  write("one.csv", "xi,re,im\n0,1,0\n");
  write("d5.csv", "xi,re,im\n5,1,0\n");
  {
    std::ofstream f(scratch() / "phi10.csv");
    write_spectrum(f, make_phi0N(10, 1.0, FrequencyGrid::torus(11)));
  }
  auto a = run("norm one.csv --spec fa:2:2:-1");
  CHECK(a.code == 0);
  CHECK(a.out == "1\n");
  auto b = run("norm d5.csv --spec fa:2:2:-1");
  CHECK(b.out == "0.196116135138184\n");
  CHECK(run("norm phi10.csv --spec fl:1:1:0").out == "6\n");
}

TEST_CASE("bad input is a usage error with a line number") {
  write("bad.csv", "xi,re,im\n0,1,0\n2,oops,0\n");
  const auto r = run("norm bad.csv");
  CHECK(r.code == 2);
  CHECK(r.out.find("line 3") != std::string::npos);
  CHECK(run("norm one.csv --spec fa:2").code == 2);
  CHECK(run("norm missing.csv").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("picard echoes the data at k = 1, T = 0") {
  const auto r = run("picard --N 10 --R 2 --k 1 --T 0 --out p1");
  REQUIRE(r.code == 0);
  std::ifstream in(scratch() / "p1.spectrum.csv");
  const auto f = read_spectrum(in);
  CHECK(fl1_norm(f - make_phi0N(10, 2.0, f.grid())) == 0.0);
  CHECK(fs::exists(scratch() / "p1.manifest.json"));
}

TEST_CASE("picard norms match the library") {
  const auto r = run("picard --N 16 --R 2 --k 2 --T 0.2 --spec fa:2:2:-1 --spec wa:2:1:0 --out p2");
  REQUIRE(r.code == 0);
  const auto grid = FrequencyGrid::torus(2 * 17 + 2);
  const auto u2 = picard_iterate(make_phi0N(16, 2.0, grid), 2, 0.2).value;
  std::istringstream table(slurp("p2.norms.csv"));
  std::string line;
  std::getline(table, line);
  CHECK(line == "spec,norm");
  int rows = 0;
  while (std::getline(table, line)) {
    const auto comma = line.find(',');
    const auto spec = SpaceSpec::parse(line.substr(0, comma));
    CHECK(std::stod(line.substr(comma + 1)) == Approx(space_norm(u2, spec)).epsilon(1e-14));
    ++rows;
  }
  CHECK(rows == 3);
  const auto pos = r.out.find("quad_error,");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 11)) <= 1e-10);
}

TEST_CASE("default sweep passes and its manifest replays the same csv") {
  const auto r = run("sweep '" + configs("default.conf") + "' --out sw/default");
  INFO(r.out);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("predicted 0.1667") != std::string::npos);
  CHECK(r.out.find("PASS") != std::string::npos);
  const auto again = run("replay sw/default.manifest.json --out sw/replayed");
  CHECK(again.code == 0);
  CHECK(slurp("sw/default.csv") == slurp("sw/replayed.csv"));
  CHECK(!slurp("sw/default.csv").empty());
}

TEST_CASE("sweep config errors exit with 2") {
  CHECK(run("sweep '" + configs("empty_ns.conf") + "' --out sw/e").code == 2);
  write("bad.conf", "s = -1\nr = 2\n");
  CHECK(run("sweep bad.conf --out sw/b").code == 2);
  write("typo.conf", "s = -1\nthetaz = 1\n");
  const auto t = run("sweep typo.conf --out sw/t");
  CHECK(t.code == 2);
  CHECK(t.out.find("line 2") != std::string::npos);
}

TEST_CASE("a sweep that misses its slopes exits with 1") {
  // no perturbation: nothing grows
  write("flat.conf", "s = -1\nNs = 16, 32, 64\nbase = smooth\namplitude = 0\n");
  const auto r = run("sweep flat.conf --out sw/flat");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("verify identities passes and replays identical constants") {
  const auto a = run("verify --suite identities --seed 5 --out v/a");
  CHECK(a.code == 0);
  CHECK(a.out.find("all passed") != std::string::npos);
  run("verify --suite identities --seed 5 --out v/b");
  CHECK(slurp("v/a.csv") == slurp("v/b.csv"));
  CHECK(slurp("v/a.csv").rfind("id,pass,constants,seed\n", 0) == 0);
  CHECK(run("verify --suite nonsense").code == 2);
}

TEST_CASE("simulate trivial states and energy drift") {
  write("zero.csv", "xi,re,im\n0,0,0\n");
  const auto z = run("simulate --input zero.csv --T 0.02 --dt 0.01 --out s/zero");
  CHECK(z.code == 0);
  CHECK(slurp("s/zero.csv") == "t,E,fl1,hs\n0,0,0,0\n0.01,0,0,0\n0.02,0,0,0\n");

  write("mean.csv", "xi,re,im\n0,0.5,0\n");
  run("simulate --input mean.csv --T 0.03 --dt 0.01 --out s/mean");
  std::istringstream rows(slurp("s/mean.csv"));
  std::string header, first, line;
  std::getline(rows, header);
  std::getline(rows, first);
  const auto tail = first.substr(first.find(','));
  while (std::getline(rows, line)) CHECK(line.substr(line.find(',')) == tail);

  {
    std::ofstream f(scratch() / "smooth.csv");
    write_spectrum(f, smooth_profile(FrequencyGrid::torus(32), 7));
  }
  const auto d = run("simulate --input smooth.csv --T 1 --dt 1e-3 --every 50 --max-drift 1e-8 --out s/smooth");
  INFO(d.out);
  CHECK(d.code == 0);
  CHECK(fs::exists(scratch() / "s/smooth.manifest.json"));
}
