#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "kc/report.hpp"

using nlohmann::json;

namespace {

struct Options {
  std::string system = "kc4";
  std::string k1 = "1/1", k2 = "1/1";
  double alpha = 1.0, beta = 2.0, gamma = 3.0, delta = 4.0;
  int points = 100;
  std::uint64_t seed = 7;
  std::string out;
  std::string format = "json";
  std::optional<double> tol_jet, tol_nested, tol_relation;

  double T = 10.0, orbit_tol = 1e-10;
  int orbits = 10;
  std::string csv;

  std::string j1 = "2/1", j2 = "2/1";
  double Eprime = 8.0, alphap = 4.0, betap = 0.0, gammap = 0.0, deltap = 0.0;
};

void add_common(CLI::App *c, Options &o) {
  c->add_option("--system", o.system, "kc3 or kc4")->check(CLI::IsMember({"kc3", "kc4"}));
  c->add_option("--k1", o.k1, "rational index p1/q1");
  c->add_option("--k2", o.k2, "rational index p2/q2");
  c->add_option("--alpha", o.alpha);
  c->add_option("--beta", o.beta);
  c->add_option("--gamma", o.gamma);
  c->add_option("--delta", o.delta, "ignored for kc3");
  c->add_option("--points", o.points, "sample points per configuration");
  c->add_option("--seed", o.seed);
  c->add_option("--out", o.out, "write the report here instead of stdout");
  c->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  c->add_option("--tol-jet", o.tol_jet);
  c->add_option("--tol-nested", o.tol_nested);
  c->add_option("--tol-relation", o.tol_relation);
}

kc::RunConfig make_config(const Options &o) {
  kc::RunConfig cfg;
  cfg.params.system = kc::parse_system(o.system);
  cfg.params.k1 = kc::RationalK::parse(o.k1);
  cfg.params.k2 = kc::RationalK::parse(o.k2);
  cfg.params.alpha = o.alpha;
  cfg.params.beta = o.beta;
  cfg.params.gamma = o.gamma;
  cfg.params.delta = cfg.params.kc3() ? 0.0 : o.delta;
  if (o.points < 1) throw kc::ConfigError("--points must be at least 1");
  cfg.points = o.points;
  cfg.seed = o.seed;
  cfg.tol = kc::Tolerances::from_env();
  if (o.tol_jet) cfg.tol.jet = *o.tol_jet;
  if (o.tol_nested) cfg.tol.nested = *o.tol_nested;
  if (o.tol_relation) cfg.tol.relation = *o.tol_relation;
  cfg.T = o.T;
  cfg.orbit_tol = o.orbit_tol;
  cfg.orbits = o.orbits;
  cfg.csv = o.csv;
  cfg.osc = {kc::System::OSC, o.alphap, o.betap, o.gammap, o.deltap, kc::RationalK::parse(o.j1),
             kc::RationalK::parse(o.j2)};
  cfg.Eprime = o.Eprime;
  return cfg;
}

void emit(const json &report, const Options &o) {
  const std::string text = o.format == "csv" ? kc::report_csv(report) : report.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw kc::ConfigError("cannot write " + o.out);
  f << text;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Constants of motion and structure relations of the extended Kepler-Coulomb systems"};
  app.require_subcommand(1);
  Options o;

  auto *verify = app.add_subcommand("verify", "identity suite, realness and independence checks");
  auto *orbit = app.add_subcommand("orbit", "integrate orbits and measure drift of every constant");
  auto *degree = app.add_subcommand("degree", "momentum degree of the polynomial constants");
  auto *stackel = app.add_subcommand("stackel", "map the caged oscillator onto the Kepler-Coulomb system");
  auto *relation = app.add_subcommand("derive-relation", "derive the order-12 relation among six generators");
  auto *catalog = app.add_subcommand("catalog", "list the identity records that apply");
  for (auto *c : {verify, orbit, degree, relation, catalog}) add_common(c, o);

  orbit->add_option("--T", o.T, "integration time");
  orbit->add_option("--tol", o.orbit_tol, "integrator tolerance");
  orbit->add_option("--orbits", o.orbits, "number of initial conditions");
  orbit->add_option("--csv", o.csv, "export the first trajectory as CSV");

  stackel->add_option("--j1", o.j1);
  stackel->add_option("--j2", o.j2);
  stackel->add_option("--Eprime", o.Eprime);
  stackel->add_option("--alphaprime", o.alphap);
  stackel->add_option("--betaprime", o.betap);
  stackel->add_option("--gammaprime", o.gammap);
  stackel->add_option("--deltaprime", o.deltap);
  stackel->add_option("--points", o.points);
  stackel->add_option("--seed", o.seed);
  stackel->add_option("--out", o.out);
  stackel->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const kc::RunConfig cfg = make_config(o);
    json report;
    if (verify->parsed()) report = kc::verify_report(cfg);
    else if (orbit->parsed()) report = kc::orbit_report(cfg);
    else if (degree->parsed()) report = kc::degree_report(cfg);
    else if (stackel->parsed()) report = kc::stackel_report(cfg);
    else if (relation->parsed()) report = kc::relation_report(cfg);
    else {
      report = {{"schema", kc::kReportSchema}, {"command", "catalog"}, {"identities", kc::identity_catalog(cfg.params)},
                {"pass", true}};
    }
    emit(report, o);
    return report["pass"].get<bool>() ? 0 : 1;
  } catch (const kc::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const kc::UnsupportedParity &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
