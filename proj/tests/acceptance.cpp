// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any line fails.
#include <chrono>
#include <cstdio>
#include <string>

#include "kc/dynamics.hpp"
#include "kc/relation.hpp"
#include "kc/report.hpp"

using namespace kc;

namespace {

using Clock = std::chrono::steady_clock;

const std::pair<RationalK, RationalK> kGrid[] = {
    {{1, 1}, {1, 1}}, {{1, 3}, {1, 1}}, {{3, 1}, {5, 3}}, {{5, 3}, {3, 5}}};

SystemParams params(System s, RationalK k1, RationalK k2) {
  SystemParams p;
  p.system = s;
  p.k1 = k1;
  p.k2 = k2;
  p.delta = s == System::KC3 ? 0.0 : 4.0;
  return p;
}

std::string cfg_str(const SystemParams &p) { return to_string(p.system) + " k=(" + p.k1.str() + "," + p.k2.str() + ")"; }

int failures = 0;

void line(int n, bool ok, const std::string &detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fixed(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

void identity_suite(int n, System s) {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_jet = 0.0, worst_nested = 0.0;
  int checked = 0;
  std::string bad;
  for (const auto &[k1, k2] : kGrid) {
    const SystemParams p = params(s, k1, k2);
    for (const auto &st : batch_check(builtin_identities(p, false), p, {}, 100, 7)) {
      ++checked;
      (st.tier == Tier::Jet ? worst_jet : worst_nested) =
          std::max(st.tier == Tier::Jet ? worst_jet : worst_nested, st.max_residual);
      if (st.failures) {
        ok = false;
        bad += " " + cfg_str(p) + ":" + st.id;
      }
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  ok = ok && secs < 60.0;
  line(n, ok,
       to_string(s) + " identity suite, " + std::to_string(checked) + " identity/config pairs at N=100, max jet residual " +
           sci(worst_jet) + " (< 1e-8), max nested residual " + sci(worst_nested) + " (< 1e-6), " + fixed(secs) + " s (< 60 s)" + bad);
}

void degrees() {
  const SystemParams p = params(System::KC4, {1, 1}, {1, 1});
  RunConfig c;
  c.params = p;
  const auto r = degree_report(c);
  std::string table;
  const char *order[] = {"L2", "L3", "K0", "J0", "K1", "K2", "J1", "J2"};
  const int expect[] = {2, 2, 2, 4, 3, 4, 5, 6};
  bool ok = r["pass"].get<bool>();
  for (int i = 0; i < 8; ++i) {
    int got = -1;
    for (const auto &row : r["degrees"])
      if (row["name"] == order[i] && row.contains("degree")) got = row["degree"].get<int>();
    ok = ok && got == expect[i];
    table += std::string(i ? " " : "") + order[i] + "=" + std::to_string(got);
  }
  line(3, ok, "momentum degrees (KC4, k1=k2=1): " + table);
}

void realness() {
  bool ok = true;
  double worst = 0.0;
  for (const auto &[k1, k2] : kGrid)
    for (System s : {System::KC3, System::KC4})
      for (const auto &st : realness_check(params(s, k1, k2), 1000, 8)) worst = std::max(worst, st.max_imag);
  ok = worst < 1e-9;
  line(4, ok, "max |Im|/scale over J1, J2, K1, K2, K0, J0 at 1000 points per configuration: " + sci(worst) + " (< 1e-9)");
}

void independence() {
  bool ok = true;
  std::string detail, raw_detail;
  for (const auto &[k1, k2] : kGrid)
    for (System s : {System::KC3, System::KC4}) {
      const SystemParams p = params(s, k1, k2);
      const auto names = generator_set(p, true), raw = generator_set(p);
      int lo = 6, raw_lo = 6;
      for (const Vec6 &x : sample_points(p, 9, 50)) {
        lo = std::min(lo, independence_rank(names, p, x));
        raw_lo = std::min(raw_lo, independence_rank(raw, p, x));
      }
      ok = ok && lo == 5 && raw_lo == 5;
      if (lo != 5) detail += " " + cfg_str(p) + " min rank " + std::to_string(lo);
      if (raw_lo != 5) raw_detail += " " + cfg_str(p) + " min rank " + std::to_string(raw_lo);
    }
  const SystemParams e = params(System::KC4, {1, 1}, {1, 1});
  int lo = 6, hi = 0;
  for (const Vec6 &x : sample_points(e, 9, 50)) {
    const int k = independence_rank({"H", "L2", "L3", "J0", "K0", "J0_prime"}, e, x);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  ok = ok && lo == 5 && hi == 5;
  line(5, ok,
       "rank of (H, L2, L3, J1|J0, K0) and of its triangular transform (H, L2, L3, J1|J2, K2) over 50 points on every "
       "configuration: " + (raw_detail.empty() && detail.empty() ? std::string("all 5") : raw_detail + detail) +
           "; Euclidean six-generator rank in [" + std::to_string(lo) + "," + std::to_string(hi) + "] (expected 5)");
}

void relation() {
  const SystemParams p = params(System::KC4, {1, 1}, {1, 1});
  const Order12Relation r = derive_order12_relation(p);
  const RelationDiff d = diff_printed(r);
  std::string m;
  for (int i = 1; i < 6; ++i) m += std::string(i > 1 ? " " : "") + "A" + std::to_string(i + 1) + (d.match[i] ? "=" : "!=");
  const bool ok = r.a1_mismatch < 1e-8 && r.holdout_residual < 1e-5 && r.phase_residual < 1e-5;
  line(6, ok,
       "A1 + 4Q max coefficient " + sci(r.a1_mismatch) + " (< 1e-8), holdout residual " + sci(r.holdout_residual) +
           ", phase-space residual " + sci(r.phase_residual) + " (< 1e-5), printed vs derived: " + m + " (" +
           std::to_string(d.entries.size()) + " differing monomials)");
}

void drift() {
  bool ok = true;
  double worst = 0.0;
  std::string where;
  for (const auto &[k1, k2] : kGrid)
    for (System s : {System::KC3, System::KC4}) {
      RunConfig c;
      c.params = params(s, k1, k2);
      const auto r = orbit_report(c);
      ok = ok && r["pass"].get<bool>();
      for (const auto &d : r["drift"])
        if (d["max_drift"].get<double>() > worst) {
          worst = d["max_drift"].get<double>();
          where = cfg_str(c.params) + " " + d["name"].get<std::string>();
        }
    }
  line(7, ok, "10 orbits per configuration, T=10, tol=1e-10: max relative drift " + sci(worst) + " (" + where + ", < 1e-6)");
}

void stackel() {
  RunConfig c;
  c.points = 100;
  c.osc = {System::OSC, 4.0, 8.0, 12.0, 4.0, {6, 5}, {2, 3}};
  c.Eprime = 60.0;
  const auto r = stackel_report(c);
  RunConfig iso;
  iso.points = 100;
  const auto q = stackel_report(iso);
  const bool example = q["map"]["E"] == -1.0 && q["map"]["alpha"] == -2.0 && q["map"]["k1"] == "1/1" && q["map"]["k2"] == "1/1";
  const bool ok = r["pass"].get<bool>() && q["pass"].get<bool>() && example;
  line(8, ok,
       "100 shell points, max |H - E| " + sci(std::max(r["shell"]["max_abs_H_minus_E"].get<double>(),
                                                        q["shell"]["max_abs_H_minus_E"].get<double>())) +
           " (< 1e-10), parameter map exact, (j=2, E'=8, alpha'=4) -> (E, alpha, k) = (-1, -2, 1, 1)");
}

void axioms() {
  bool ok = true;
  double as = 0.0, lz = 0.0, jc = 0.0;
  for (const auto &[k1, k2] : kGrid)
    for (System s : {System::KC3, System::KC4}) {
      const auto a = bracket_axioms(params(s, k1, k2), 100, 10);
      as = std::max(as, a.antisymmetry);
      lz = std::max(lz, a.leibniz);
      jc = std::max(jc, a.jacobi);
    }
  ok = as == 0.0 && lz < 1e-10 && jc < 1e-6;
  line(9, ok, "antisymmetry " + sci(as) + " (exact), Leibniz " + sci(lz) + " (< 1e-10), Jacobi " + sci(jc) + " (< 1e-6)");
}

} // namespace

int main() {
  try {
    identity_suite(1, System::KC3);
    identity_suite(2, System::KC4);
    degrees();
    realness();
    independence();
    relation();
    drift();
    stackel();
    axioms();
  } catch (const std::exception &e) {
    std::printf("FAIL aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
