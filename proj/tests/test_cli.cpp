// End-to-end exercises of the installed command-line interface: exit codes,
// report files, determinism.

#include <catch2/catch.hpp>

#include <g2lab/checks.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string out_file = std::string(G2LAB_CLI_PATH) + ".out.tmp";
  std::string cmd = std::string(G2LAB_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(out_file.c_str());
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify: green run, designed failure, usage error") {
  auto ok = run_cli("verify --trials 10 --seed 5");
  INFO(ok.output);
  REQUIRE(ok.exit_code == 0);
  REQUIRE(ok.output.find("fail") == std::string::npos);

  auto fail = run_cli(
      "verify --mode float --trials 10 --suite coassociator-identity "
      "--tolerance coassociator-identity=1e-30");
  REQUIRE(fail.exit_code == 1);
  REQUIRE(fail.output.find("fail") != std::string::npos);

  auto usage = run_cli("verify --mode wat");
  REQUIRE(usage.exit_code == 2);

  auto nosuch = run_cli("frobnicate");
  REQUIRE(nosuch.exit_code == 2);
}

TEST_CASE("verify: list covers every check and reports are byte-identical") {
  auto list = run_cli("verify --list");
  REQUIRE(list.exit_code == 0);
  // the printed index covers every registered check and its statement
  for (const auto& def : g2lab::all_checks()) {
    REQUIRE(list.output.find(def.id) != std::string::npos);
    REQUIRE(list.output.find(def.statement) != std::string::npos);
  }

  std::string r1 = "/tmp/g2lab_cli_r1.json", r2 = "/tmp/g2lab_cli_r2.json",
              r3 = "/tmp/g2lab_cli_r3.json";
  REQUIRE(run_cli("verify --mode float --trials 12 --seed 9 --out " + r1).exit_code == 0);
  REQUIRE(run_cli("verify --mode float --trials 12 --seed 9 --threads 3 --out " + r2).exit_code == 0);
  REQUIRE(slurp(r1) == slurp(r2));
  // the pool cap from the environment must not change the report either
  {
    std::string cmd = "G2LAB_THREADS=2 " + std::string(G2LAB_CLI_PATH) +
                      " verify --mode float --trials 12 --seed 9 --out " + r3 + " > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    REQUIRE(slurp(r1) == slurp(r3));
  }
  std::remove(r1.c_str());
  std::remove(r2.c_str());
  std::remove(r3.c_str());
}

TEST_CASE("liealg: certification, rejection, parse errors") {
  {
    std::ofstream os("/tmp/g2lab_abelian.txt");
    os << "# flat torus\n";
  }
  auto ab = run_cli("liealg /tmp/g2lab_abelian.txt --vertical 4,5,6,7");
  INFO(ab.output);
  REQUIRE(ab.exit_code == 0);
  REQUIRE(ab.output.find("certified") != std::string::npos);
  REQUIRE(ab.output.find("tau2        = 0") != std::string::npos);
  REQUIRE(ab.output.find("consistent: 1") != std::string::npos);

  {
    std::ofstream os("/tmp/g2lab_closed.txt");
    os << "c 6 1 2 = -1\nc 7 1 3 = -1\n";
  }
  auto cl = run_cli("liealg /tmp/g2lab_closed.txt");
  REQUIRE(cl.exit_code == 0);
  REQUIRE(cl.output.find("|tau2|^2    = 2") != std::string::npos);

  {
    std::ofstream os("/tmp/g2lab_open.txt");
    os << "c 7 1 2 = 1\n";  // d(phi) survives
  }
  auto rej = run_cli("liealg /tmp/g2lab_open.txt");
  REQUIRE(rej.exit_code == 1);
  REQUIRE(rej.output.find("REJECTED") != std::string::npos);

  {
    std::ofstream os("/tmp/g2lab_badsym.txt");
    os << "c 3 1 2 = 1\nc 3 2 1 = 1\n";
  }
  auto bad = run_cli("liealg /tmp/g2lab_badsym.txt");
  REQUIRE(bad.exit_code == 2);
  REQUIRE(bad.output.find("line 2") != std::string::npos);

  auto missing = run_cli("liealg /tmp/g2lab_does_not_exist.txt");
  REQUIRE(missing.exit_code == 2);
}

TEST_CASE("search: zero coefficients give the flat algebra only; output parses back") {
  auto z = run_cli("search --coeffs 0 --out-dir /tmp/g2lab_search0");
  REQUIRE(z.exit_code == 0);
  REQUIRE(z.output.find("found 1 algebras") != std::string::npos);
  // the written file round-trips through liealg
  auto back = run_cli("liealg /tmp/g2lab_search0/g2_closed_00.txt");
  REQUIRE(back.exit_code == 0);
  REQUIRE(back.output.find("certified") != std::string::npos);

  auto bad = run_cli("search --coeffs 0,zebra");
  REQUIRE(bad.exit_code == 2);
}

TEST_CASE("variations: CSV output and unknown-family listing") {
  std::string csv = "/tmp/g2lab_var.csv";
  auto ok = run_cli("variations --family affine-fiber --grid 8 --steps 4 --out " + csv);
  INFO(ok.output);
  REQUIRE(ok.exit_code == 0);
  std::string data = slurp(csv);
  REQUIRE(data.find("t,vol,dvol,d2vol") == 0);
  REQUIRE(data.find("0,1,0,0") != std::string::npos);
  std::remove(csv.c_str());

  auto unknown = run_cli("variations --family klein-bottle");
  REQUIRE(unknown.exit_code == 2);
  for (const char* name : {"affine-fiber", "sphere", "graph", "tangential"})
    REQUIRE(unknown.output.find(name) != std::string::npos);
}
