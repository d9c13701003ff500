#include "kc/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kc/dynamics.hpp"
#include "kc/relation.hpp"

namespace kc {

using nlohmann::json;

namespace {

json params_json(const SystemParams &p) {
  json j = {{"system", to_string(p.system)}, {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
            {"k1", p.k1.str()}, {"k2", p.k2.str()}};
  if (p.system != System::KC3) j["delta"] = p.delta;
  return j;
}

std::string tier_str(Tier t) { return t == Tier::Jet ? "jet" : "nested"; }

json envelope(const RunConfig &cfg, const std::string &command) {
  json r;
  r["schema"] = kReportSchema;
  r["command"] = command;
  r["config"] = config_json(cfg, command);
  return r;
}

} // namespace

json config_json(const RunConfig &cfg, const std::string &command) {
  json c;
  c["seed"] = cfg.seed;
  if (command == "stackel") {
    c["oscillator"] = params_json(cfg.osc);
    c["Eprime"] = cfg.Eprime;
    c["points"] = cfg.points;
    return c;
  }
  c["params"] = params_json(cfg.params);
  c["points"] = cfg.points;
  c["tolerances"] = {{"jet", cfg.tol.jet}, {"nested", cfg.tol.nested}, {"relation", cfg.tol.relation}};
  if (command == "orbit")
    c["orbit"] = {{"T", cfg.T}, {"tol", cfg.orbit_tol}, {"orbits", cfg.orbits}, {"drift_bound", cfg.drift_bound}};
  return c;
}

json verify_report(const RunConfig &cfg) {
  const SystemParams &p = cfg.params;
  if (p.system == System::OSC) throw ConfigError("verify runs on kc3 or kc4");
  if (!p.odd()) throw ConfigError("verify needs p1, q1, p2, q2 all odd");
  json r = envelope(cfg, "verify");
  bool pass = true;

  json ids = json::array();
  for (const auto &st : batch_check(builtin_identities(p), p, {}, cfg.points, cfg.seed, cfg.tol)) {
    const bool ok = st.failures == 0;
    if (!st.erratum) pass = pass && ok;
    ids.push_back({{"id", st.id}, {"group", st.group}, {"citation", st.ref}, {"tier", tier_str(st.tier)},
                   {"erratum", st.erratum}, {"note", st.note}, {"points", st.points},
                   {"max_residual", st.max_residual}, {"median_residual", st.median_residual},
                   {"max_plain_residual", st.max_plain_residual}, {"tolerance", st.tolerance},
                   {"failures", st.failures}, {"pass", ok}});
  }
  r["identities"] = ids;

  json real = json::array();
  for (const auto &st : realness_check(p, cfg.points, cfg.seed + 1)) {
    const bool ok = st.max_imag < 1e-9;
    pass = pass && ok;
    real.push_back({{"name", st.name}, {"points", st.points}, {"max_imag", st.max_imag},
                    {"max_imag_plain", st.max_imag_plain}, {"pass", ok}});
  }
  r["realness"] = real;

  json ranks = json::array();
  auto rank_entry = [&](const std::vector<std::string> &names, int expected, bool gating) {
    int lo = 6, hi = 0;
    for (const Vec6 &x : sample_points(p, cfg.seed + 2, cfg.points)) {
      const int k = independence_rank(names, p, x);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    const bool ok = lo == expected && hi == expected;
    if (gating) pass = pass && ok;
    ranks.push_back({{"observables", names}, {"expected", expected}, {"min_rank", lo}, {"max_rank", hi},
                     {"gating", gating}, {"pass", ok}});
  };
  rank_entry(generator_set(p, true), 5, true);
  rank_entry(generator_set(p), 5, false);
  if (p.euclidean()) rank_entry({"H", "L2", "L3", "J0", "K0", "J0_prime"}, 5, true);
  r["rank"] = ranks;

  const auto ax = bracket_axioms(p, cfg.points, cfg.seed + 4);
  const bool ax_ok = ax.antisymmetry == 0.0 && ax.leibniz < 1e-10 && ax.jacobi < 1e-6;
  pass = pass && ax_ok;
  r["bracket_axioms"] = {{"points", ax.points}, {"triples", ax.triples}, {"antisymmetry", ax.antisymmetry},
                         {"leibniz", ax.leibniz}, {"jacobi", ax.jacobi},
                         {"bounds", {{"antisymmetry", 0.0}, {"leibniz", 1e-10}, {"jacobi", 1e-6}}}, {"pass", ax_ok}};

  if (p.kc3()) {
    const auto rs = kc3_r3_over_r2(p, cfg.points, cfg.seed + 3);
    r["r3_over_r2"] = {{"points", rs.points}, {"min", rs.min}, {"median", rs.median}, {"max", rs.max},
                       {"note", "R3 = {J1,K0}, R2 = {L3,K0}; observed only, no closed form asserted"}};
  }
  r["pass"] = pass;
  return r;
}

json orbit_report(const RunConfig &cfg) {
  const SystemParams &p = cfg.params;
  if (p.system == System::OSC) throw ConfigError("orbit runs on kc3 or kc4");
  json r = envelope(cfg, "orbit");
  bool pass = true;
  std::map<std::string, double> worst;
  json orbits = json::array();
  const auto starts = sample_points(p, cfg.seed, cfg.orbits);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Trajectory tr = integrate({Chart::SphericalKC, starts[i]}, p, cfg.T, cfg.orbit_tol);
    if (i == 0 && !cfg.csv.empty()) {
      std::ofstream f(cfg.csv);
      if (!f) throw ConfigError("cannot write " + cfg.csv);
      write_csv(f, tr);
    }
    const bool complete = tr.status == OrbitStatus::Completed;
    pass = pass && complete;
    double m = 0.0;
    for (const auto &[n, d] : drift_table(tr, p)) {
      worst[n] = std::max(worst[n], d);
      m = std::max(m, d);
    }
    orbits.push_back({{"index", i}, {"x0", std::vector<double>(starts[i].data(), starts[i].data() + 6)},
                      {"steps", tr.steps}, {"rejected", tr.rejected}, {"t_end", tr.t.back()},
                      {"status", complete ? "completed" : "singularity_approach"}, {"max_drift", m}});
  }
  json drift = json::array();
  for (const auto &[n, d] : worst) {
    const bool ok = d < cfg.drift_bound;
    pass = pass && ok;
    drift.push_back({{"name", n}, {"max_drift", d}, {"bound", cfg.drift_bound}, {"pass", ok}});
  }
  r["orbits"] = orbits;
  r["drift"] = drift;
  r["pass"] = pass;
  return r;
}

json degree_report(const RunConfig &cfg) {
  const SystemParams &p = cfg.params;
  if (p.system == System::OSC) throw ConfigError("degree runs on kc3 or kc4");
  json r = envelope(cfg, "degree");
  Rng rng(cfg.seed);
  const Vec6 x = sample_point(p, rng);
  bool pass = true;
  json rows = json::array();
  for (const auto &o : observables(p)) {
    if (!o.real || o.degree < 0) continue;
    json row = {{"name", o.name}, {"claimed", o.degree}};
    try {
      const auto e = momentum_degree(o.name, p, x);
      const bool ok = e.degree == o.degree;
      row["degree"] = e.degree;
      row["slope"] = e.slope;
      row["pass"] = ok;
      pass = pass && ok;
    } catch (const NotPolynomial &err) {
      row["error"] = err.what();
      row["pass"] = false;
      pass = false;
    }
    rows.push_back(row);
  }
  r["degrees"] = rows;
  r["pass"] = pass;
  return r;
}

json stackel_report(const RunConfig &cfg) {
  const SystemParams &osc = cfg.osc;
  json r = envelope(cfg, "stackel");
  const auto pts = sample_shell_points(osc, cfg.Eprime, cfg.seed, cfg.points);
  const StackelResult m0 = stackel_map(osc, cfg.Eprime, pts.front());
  const SystemParams &kc = m0.kc;
  r["map"] = {{"E", m0.E}, {"alpha", kc.alpha}, {"beta", kc.beta}, {"gamma", kc.gamma}, {"delta", kc.delta},
              {"k1", kc.k1.str()}, {"k2", kc.k2.str()}, {"odd_indices", m0.odd_indices}};
  const bool exact = m0.E == -osc.alpha / 4.0 && kc.alpha == -cfg.Eprime / 4.0 && kc.beta == osc.beta / 4.0 &&
                     kc.gamma == osc.gamma / 4.0 && kc.delta == osc.delta / 4.0 &&
                     kc.k1.value() == osc.k1.value() / 2.0 && kc.k2.value() == osc.k2.value() / 2.0;
  double shell = 0.0, l2 = 0.0, hosc = 0.0;
  for (const auto &x : pts) {
    const StackelResult m = stackel_map(osc, cfg.Eprime, x);
    const Point6<double> xo = x.x, y = m.y.x;
    hosc = std::max(hosc, std::abs(H(xo, osc) - cfg.Eprime));
    shell = std::max(shell, std::abs(H(y, m.kc) - m.E));
    const double l2o = L2(xo, osc);
    l2 = std::max(l2, std::abs(L2(y, m.kc) - l2o / 4.0) / std::max(std::abs(l2o), 1.0));
  }
  r["shell"] = {{"points", int(pts.size())}, {"max_oscillator_shell_error", hosc}, {"max_abs_H_minus_E", shell},
                {"max_L2_quarter_residual", l2}, {"bound", 1e-10}};
  if (!m0.odd_indices) r["warning"] = "k = j/2 is not a ratio of odd integers; the KC identity suite does not apply";
  r["parameter_map_exact"] = exact;
  r["pass"] = exact && shell < 1e-10 && l2 < 1e-10;
  return r;
}

json relation_report(const RunConfig &cfg) {
  json r = envelope(cfg, "derive-relation");
  const auto rel = derive_order12_relation(cfg.params, cfg.seed, 1200, cfg.points);
  auto poly_json = [](const Poly4 &a) {
    json t = json::array();
    for (const auto &[m, c] : a) t.push_back({{"monomial", monomial_str(m)}, {"coefficient", c}});
    return t;
  };
  json coef = json::object();
  for (int j = 0; j < 6; ++j) coef["A" + std::to_string(j + 1)] = poly_json(rel.A[j]);
  r["coefficients"] = coef;
  r["fit"] = {{"unknowns", rel.unknowns}, {"fit_points", rel.fit_points}, {"fit_residual", rel.fit_residual},
              {"holdout_residual", rel.holdout_residual}, {"phase_residual", rel.phase_residual},
              {"negative_control", rel.negative_control}, {"a1_plus_4q_max_coefficient", rel.a1_mismatch}};
  const auto d = diff_printed(rel);
  json diff = json::array();
  for (const auto &e : d.entries)
    diff.push_back({{"coefficient", "A" + std::to_string(e.index)}, {"monomial", monomial_str(e.m)},
                    {"printed", e.printed}, {"derived", e.derived}});
  json match = json::object();
  for (int j = 1; j < 6; ++j) match["A" + std::to_string(j + 1)] = d.match[j];
  r["printed_diff"] = {{"matches", match}, {"mismatches", diff},
                       {"reading", "a,b,c,d = alpha,beta,gamma,delta; H^22 -> H^2; L^2 K0 -> L2^2 K0; La^2d -> a^2 d; "
                                   "(+c)b -> (b+c)"}};
  const bool pass = rel.a1_mismatch < 1e-8 && rel.holdout_residual < cfg.tol.relation &&
                    rel.phase_residual < cfg.tol.relation && rel.negative_control > cfg.tol.relation;
  r["pass"] = pass;
  return r;
}

json identity_catalog(const SystemParams &p) {
  json t = json::array();
  for (const auto &rec : builtin_identities(p)) {
    SystemParams k3 = p, k4 = p, eu = p;
    k3.system = System::KC3;
    k4.system = System::KC4;
    k4.k1 = {3, 1};
    eu.system = System::KC4;
    eu.k1 = eu.k2 = {1, 1};
    json app = json::array();
    if (rec.applies(k3)) app.push_back("kc3");
    if (rec.applies(k4)) app.push_back("kc4");
    else if (rec.applies(eu)) app.push_back("kc4 k1=k2=1");
    t.push_back({{"id", rec.id}, {"group", rec.group}, {"citation", rec.ref}, {"tier", tier_str(rec.tier)},
                 {"erratum", rec.erratum}, {"applies_to", app}});
  }
  return t;
}

std::string report_csv(const json &report) {
  json rows = json::array();
  for (const char *k : {"identities", "degrees", "drift"})
    if (report.contains(k)) rows = report[k];
  if (report.contains("printed_diff")) rows = report["printed_diff"]["mismatches"];
  if (report.contains("shell")) rows.push_back(report["shell"]);

  std::ostringstream os;
  if (rows.empty()) return os.str();
  std::vector<std::string> keys;
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it)
    if (!it->is_structured()) keys.push_back(it.key());
  for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << keys[i];
  os << '\n';
  for (const auto &row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) os << ',';
      const json v = row.value(keys[i], json());
      if (!v.is_string()) {
        if (!v.is_null()) os << v.dump();
        continue;
      }
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) {
        os << s;
        continue;
      }
      os << '"';
      for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    }
    os << '\n';
  }
  return os.str();
}

} // namespace kc
