#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = EFFACTION_CLI_PATH;
const std::string config_dir = EFFACTION_CONFIG_DIR;

struct RunResult {
  int exit_code;
  std::string stdout_text;
};

RunResult run(const std::string& args) {
  const fs::path out = fs::temp_directory_path() /
                       ("effaction_cli_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = cli + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  fs::remove(out);
  return {WEXITSTATUS(status), buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("effaction_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("tabulate: deterministic byte-identical reruns") {
  TempDir tmp;
  const std::string cfg = config_dir + "/quartic.ini";
  const auto a = run("tabulate --config " + cfg + " --grid 64 --out " +
                     (tmp.path / "a.csv").string());
  const auto b = run("tabulate --config " + cfg + " --grid 64 --out " +
                     (tmp.path / "b.csv").string());
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  const std::string fa = slurp(tmp.path / "a.csv"), fb = slurp(tmp.path / "b.csv");
  CHECK(!fa.empty());
  CHECK(fa == fb);
}

TEST_CASE("tabulate: flagged points keep exit status 0") {
  TempDir tmp;
  const auto r = run("tabulate --config " + config_dir + "/metastable.ini --out " +
                     (tmp.path / "m.csv").string());
  CHECK(r.exit_code == 0);
  const std::string text = slurp(tmp.path / "m.csv");
  CHECK(text.find(",0\n") != std::string::npos);
  CHECK(text.find(",1\n") != std::string::npos);
}

TEST_CASE("trajectory: one harmonic period returns home") {
  TempDir tmp;
  const auto r = run("trajectory --config " + config_dir +
                     "/harmonic.ini --mode classical --x0 1 --v0 0 --tmax 6.2832 --out " +
                     (tmp.path / "t.csv").string());
  CHECK(r.exit_code == 0);
  std::istringstream in(slurp(tmp.path / "t.csv"));
  std::string header, line, last;
  std::getline(in, header);
  CHECK(header == "t,x,v,E,r");
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  const double x_final = std::strtod(last.c_str() + last.find(',') + 1, nullptr);
  CHECK(std::abs(x_final - 1.0) <= 1e-6);
}

TEST_CASE("trajectory: effective mode writes the full record") {
  TempDir tmp;
  const auto r = run("trajectory --config " + config_dir +
                     "/quartic.ini --mode effective --x0 0.5 --v0 0 --tmax 10 --out " +
                     (tmp.path / "e.csv").string());
  CHECK(r.exit_code == 0);
  const std::string text = slurp(tmp.path / "e.csv");
  CHECK(text.rfind("t,x,v,E,r\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') > 10);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run("trajectory --config " + config_dir +
            "/harmonic.ini --mode nonsense --x0 1 --v0 0 --tmax 1 --out /tmp/x.csv")
            .exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("tabulate").exit_code == 2);  // missing required --config
  CHECK(run("tabulate --config /nonexistent.ini --out /tmp/x.csv").exit_code == 2);
}

TEST_CASE("trajectory that exits the domain fails but keeps the partial CSV") {
  TempDir tmp;
  // Quartic config domain is [-4,4]; give it enough energy to escape.
  const auto r = run("trajectory --config " + config_dir +
                     "/metastable.ini --mode classical --x0 0 --v0 2.5 --tmax 50 --out " +
                     (tmp.path / "esc.csv").string());
  CHECK(r.exit_code == 1);
  const std::string text = slurp(tmp.path / "esc.csv");
  CHECK(text.rfind("t,x,v,E,r\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') > 2);
}

TEST_CASE("validate: bundled harmonic and quartic configs pass, as CSV") {
  const auto h = run("validate --config " + config_dir + "/harmonic.ini");
  CHECK(h.exit_code == 0);
  CHECK(h.stdout_text.rfind("check,status,residual,tolerance,note\n", 0) == 0);
  CHECK(h.stdout_text.find("FAIL") == std::string::npos);
  CHECK(h.stdout_text.find("\"harmonic exactness\",pass,") != std::string::npos);

  const auto q = run("validate --config " + config_dir + "/quartic.ini");
  CHECK(q.exit_code == 0);
  CHECK(q.stdout_text.find("\"variational minimum vs ground state\",pass,") !=
        std::string::npos);
}

TEST_CASE("validate: kT > 0 skips the probe with a notice") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "thermal.ini";
  std::ofstream(cfg) << "[problem]\nmass = \"1\"\npotential = \"0.5*x^2\"\n"
                        "kT = 0.5\ndomain = -6 6\n";
  const auto r = run("validate --config " + cfg.string() + " --z-probe");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("T>0 unsupported by probe") != std::string::npos);
}

TEST_CASE("solve prints a single CSV row") {
  const auto r = run("solve --config " + config_dir + "/quartic.ini --at 0");
  CHECK(r.exit_code == 0);
  std::istringstream in(r.stdout_text);
  std::string header, row, extra;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK_FALSE(std::getline(in, extra));
  CHECK(header == "x,Omega,a2,W,iterations,residual,converged,method");
  CHECK(row.find("1.6716998") != std::string::npos);
  CHECK(row.find("damped-iteration") != std::string::npos);
}
