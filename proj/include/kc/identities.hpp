#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kc/catalog.hpp"
#include "kc/sampler.hpp"

namespace kc {

enum class Tier { Jet, Nested };

struct Tolerances {
  double jet = 1e-8;
  double nested = 1e-6;
  double relation = 1e-5;

  double of(Tier t) const { return t == Tier::Jet ? jet : nested; }
  // KC_TOL_JET, KC_TOL_NESTED, KC_TOL_RELATION
  static Tolerances from_env();
};

// catalog lifted to second-order jets at one point; brackets come from it
class Context {
public:
  Context(const Vec6 &x, const SystemParams &p);

  const SystemParams &params() const { return p_; }
  const J2t &at(const std::string &n) const;
  bool has(const std::string &n) const { return c_.count(n) != 0; }

  Tracked operator()(const std::string &n) const { return at(n).v.v; }
  Tracked pb(const std::string &a, const std::string &b) const { return poisson_bracket(at(a), at(b)).v; }
  J1t pb1(const std::string &a, const std::string &b) const { return poisson_bracket(at(a), at(b)); }
  Tracked pb(const std::string &a, const J1t &inner) const { return poisson_bracket(at(a).v, inner); }
  Tracked pb(const J1t &a, const J1t &b) const { return poisson_bracket(a, b); }

private:
  SystemParams p_;
  Catalog<J2t> c_;
};

struct Sides {
  Tracked lhs, rhs;
};

struct IdentityRecord {
  std::string id;
  std::string group;  // a..i
  std::string ref;    // where the relation is stated
  Tier tier = Tier::Jet;
  bool erratum = false;  // the form as printed; reported, never gating
  std::string note;
  std::function<bool(const SystemParams &)> applies;
  std::function<Sides(const Context &)> eval;
};

double residual(const Sides &s);       // |L-R| / max(mag L, mag R, 1)
double plain_residual(const Sides &s); // |L-R| / max(|L|, |R|, 1)

std::vector<IdentityRecord> builtin_identities(const SystemParams &p, bool include_errata = true);

double check_identity(const IdentityRecord &rec, const Vec6 &x, const SystemParams &p);

struct ResidualStats {
  std::string id, group, ref, note;
  bool erratum = false;
  Tier tier = Tier::Jet;
  int points = 0;
  double max_residual = 0.0;
  double median_residual = 0.0;
  double max_plain_residual = 0.0;
  double tolerance = 0.0;
  int failures = 0;
};

std::vector<ResidualStats> batch_check(const std::vector<IdentityRecord> &recs, const SystemParams &p,
                                       const SamplerConfig &cfg, int n, std::uint64_t seed,
                                       const Tolerances &tol = {});

struct NotPolynomial : std::runtime_error { using std::runtime_error::runtime_error; };

struct DegreeEstimate {
  int degree = 0;
  double slope = 0.0;
};

// slope of log|F(q, lambda p)| over lambda in lambda0 * {2,4,8,16}
DegreeEstimate momentum_degree(const std::string &name, const SystemParams &p, const Vec6 &x, double lambda0 = 1e3);

int independence_rank(const std::vector<std::string> &names, const SystemParams &p, const Vec6 &x, double cutoff = 1e-8);

// (H, L2, L3, J1 or J0, K0). The reduced form swaps K0 -> K2 = L3 K0 + D2(L2) and J0 -> J2 = L2 J0 + D1(L3):
// a triangular change given L2, L3, so the rank is the same, but it avoids losing the K2 gradient under D2
// where K+- are tiny.
std::vector<std::string> generator_set(const SystemParams &p, bool reduced = false);

struct RealnessStats {
  std::string name;
  int points = 0;
  double max_imag = 0.0;        // max |Im| / max(mag, 1)
  double max_imag_plain = 0.0;  // max |Im| / max(|value|, 1)
};

// J1, J2, K1, K2, K0 and (KC4) J0 at n sampled real points
std::vector<RealnessStats> realness_check(const SystemParams &p, int n, std::uint64_t seed, const SamplerConfig &cfg = {});

// KC3 only: R3 = {J1,K0} against R2 = {L3,K0}; no closed form is asserted, the ratio is recorded
struct RatioSample {
  double min = 0.0, max = 0.0, median = 0.0;
  int points = 0;
};
RatioSample kc3_r3_over_r2(const SystemParams &p, int n, std::uint64_t seed);

// Poisson-bracket axioms over every triple of distinct real constants at n points.
// Antisymmetry is the raw |{F,G} + {G,F}|, the others are scaled like residual().
struct BracketAxioms {
  int points = 0, triples = 0;
  double antisymmetry = 0.0;
  double leibniz = 0.0;   // {F, G K} against {F,G} K + G {F,K}
  double jacobi = 0.0;    // {F,{G,K}} + {G,{K,F}} + {K,{F,G}}
};
BracketAxioms bracket_axioms(const SystemParams &p, int n, std::uint64_t seed, const SamplerConfig &cfg = {});

} // namespace kc
