// Runs the built command-line tool and inspects exit codes and files.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "rlcthermo_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(RLCTHERMO_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const auto path = kWork / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("default check passes") {
  const auto out = (kWork / "report.json").string();
  fs::create_directories(kWork);
  CHECK(run("check --out " + out) == 0);
  CHECK(slurp(out).find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("tolerance 0 fails every check") { CHECK(run("check --tolerance 0") == 1); }

TEST_CASE("usage and config problems exit with 2") {
  CHECK(run("check --config " + write("od.toml", "[check]\nR_fraction = [1.1]\n")) == 2);
  CHECK(run("check --config " + write("bad.toml", "[check\n")) == 2);
  CHECK(run("check --config /nonexistent/x.toml") == 2);
  CHECK(run("") == 2);
  CHECK(run("check --no-such-flag") == 2);
  CHECK(run("sweep --format xml") == 2);
  CHECK(run("sweep --config " + write("obs.toml", "[sweep]\nobservables = [\"heat\"]\n")) == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("sweep-entropy writes identical CSV twice") {
  const auto a = (kWork / "a.csv").string();
  const auto b = (kWork / "b.csv").string();
  CHECK(run("sweep-entropy --seedless --cross-check on --out " + a) == 0);
  CHECK(run("sweep-entropy --seedless --cross-check on --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("index,L,C,R,beta,omega,S_cf,S_oracle,dSdR_cf,converged,N_used\n", 0) == 0);
}

TEST_CASE("sweep and convergence run") {
  CHECK(run("sweep --format json --out " + (kWork / "s.json").string()) == 0);
  CHECK(run("convergence --tolerance 1e-6 --out " + (kWork / "c.json").string()) == 0);
  CHECK(slurp((kWork / "c.json").string()).find("\"tolerance\": 1e-06") != std::string::npos);
}
