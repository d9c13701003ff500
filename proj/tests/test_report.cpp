#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"
#include "support.hpp"

#include "kc/report.hpp"

using namespace kc;
using namespace kc::test;
using nlohmann::json;

namespace {

RunConfig small(const SystemParams &p) {
  RunConfig c;
  c.params = p;
  c.points = 10;
  return c;
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string(KC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string &path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("verify report is deterministic and cites every identity") {
  const RunConfig c = small(kc4());
  const json a = verify_report(c), b = verify_report(c);
  CHECK(a.dump() == b.dump());
  CHECK(a["schema"] == kReportSchema);
  CHECK(a["pass"].get<bool>());
  for (const auto &e : a["identities"]) {
    CHECK_FALSE(e["citation"].get<std::string>().empty());
    CHECK(e.contains("max_residual"));
  }
  CHECK(a["bracket_axioms"]["pass"].get<bool>());
}

TEST_CASE("verify refuses even indices and the oscillator") {
  CHECK_THROWS_AS(verify_report(small(kc3({2, 1}, {1, 1}))), ConfigError);
  SystemParams osc{System::OSC, 4.0, 0.0, 0.0, 0.0, {2, 1}, {2, 1}};
  CHECK_THROWS_AS(verify_report(small(osc)), ConfigError);
}

TEST_CASE("stackel report for the isotropic oscillator") {
  RunConfig c = small(kc4());
  const json r = stackel_report(c);
  CHECK(r["map"]["E"] == -1.0);
  CHECK(r["map"]["alpha"] == -2.0);
  CHECK(r["map"]["k1"] == "1/1");
  CHECK(r["map"]["k2"] == "1/1");
  CHECK(r["shell"]["max_abs_H_minus_E"].get<double>() < 1e-10);
  CHECK(r["pass"].get<bool>());
}

TEST_CASE("degree report at k1 = k2 = 1") {
  const json r = degree_report(small(kc4()));
  CHECK(r["pass"].get<bool>());
}

TEST_CASE("csv projection of the residual table") {
  const json r = verify_report(small(kc3()));
  const std::string csv = report_csv(r);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.find("max_residual") != std::string::npos);
  CHECK(header.find("citation") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == long(r["identities"].size()) + 1);
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("verify --system kc4 --k1 1/1 --k2 1/1 --points 20 --seed 7") == 0);
  CHECK(run_cli("verify --system kc3 --k1 2/1 --k2 1/1") == 2);
  CHECK(run_cli("verify --system kc5") == 2);
  CHECK(run_cli("verify --k1 banana") == 2);
  CHECK(run_cli("stackel --j1 2/1 --j2 2/1 --Eprime 8 --alphaprime 4") == 0);
  CHECK(run_cli("catalog --system kc3") == 0);
  // a jet tolerance nobody can meet
  CHECK(run_cli("verify --system kc4 --points 5 --tol-jet 1e-40 --tol-nested 1e-40") == 1);
}

TEST_CASE("command-line output is byte-identical across runs") {
  const std::string a = "kc_report_a.json", b = "kc_report_b.json";
  REQUIRE(run_cli("verify --system kc3 --k1 1/3 --points 10 --seed 5 --out " + a) == 0);
  REQUIRE(run_cli("verify --system kc3 --k1 1/3 --points 10 --seed 5 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("trajectory export behind the orbit flag") {
  const std::string path = "kc_orbit.csv";
  REQUIRE(run_cli("orbit --system kc4 --orbits 1 --T 0.5 --csv " + path) == 0);
  const std::string s = slurp(path);
  CHECK(s.rfind("t,q1,q2,q3,p1,p2,p3", 0) == 0);
  std::remove(path.c_str());
}
