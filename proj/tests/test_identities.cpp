#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "kc/identities.hpp"

using namespace kc;
using namespace kc::test;

namespace {

const IdentityRecord &find(const std::vector<IdentityRecord> &recs, const std::string &id) {
  for (const auto &r : recs)
    if (r.id == id) return r;
  FAIL("identity " << id << " missing");
  throw std::logic_error("unreachable");
}

bool has_group(const std::vector<IdentityRecord> &recs, const std::string &g) {
  for (const auto &r : recs)
    if (r.group == g) return true;
  return false;
}

} // namespace

TEST_CASE("applicability of identity groups") {
  const auto three = builtin_identities(kc3());
  for (const auto &r : three) {
    CAPTURE(r.id);
    CHECK(r.id.find("J0") == std::string::npos);
  }
  CHECK_FALSE(has_group(three, "i"));
  CHECK(has_group(builtin_identities(kc4()), "i"));
  CHECK_FALSE(has_group(builtin_identities(kc4({1, 3}, {1, 1})), "i"));
  for (const auto &r : builtin_identities(kc4())) CHECK_FALSE(r.ref.empty());
  for (const auto &r : builtin_identities(kc4(), false)) CHECK_FALSE(r.erratum);
}

TEST_CASE("square identity at a KC3 point") {
  const SystemParams p = kc3({1, 3}, {5, 3});
  const auto recs = builtin_identities(p);
  const auto &rec = find(recs, "J2^2=-L2 J1^2+4P1");
  for (const Vec6 &x : sample_points(p, 71, 5)) CHECK(check_identity(rec, x, p) < 1e-9);
}

TEST_CASE("a sanity record {F,F} = 0 is exact") {
  IdentityRecord rec;
  rec.id = "{J1,J1}";
  rec.applies = [](const SystemParams &) { return true; };
  rec.eval = [](const Context &c) { return Sides{c.pb("J1", "J1"), Tracked(0.0)}; };
  for (const SystemParams &p : {kc3({5, 3}, {3, 5}), kc4()})
    for (const Vec6 &x : sample_points(p, 73, 10)) CHECK(check_identity(rec, x, p) == 0.0);
}

TEST_CASE("L2 = L3 is refused") {
  const SystemParams p = kc3();
  Vec6 x;
  x << 2.0, std::numbers::pi / 2, 0.6, 0.3, 0.0, 0.4;
  CHECK_FALSE(admissible(x, p));
  CHECK_THROWS_AS(check_identity(builtin_identities(p).front(), x, p), InadmissiblePoint);
}

TEST_CASE("batch checks") {
  const SystemParams p = kc4();
  const auto recs = builtin_identities(p, false);
  CHECK_THROWS_AS(batch_check(recs, p, {}, 0, 7), ConfigError);

  const auto a = batch_check(recs, p, {}, 30, 7), b = batch_check(recs, p, {}, 30, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(a[i].id);
    CHECK(a[i].max_residual == b[i].max_residual);
    CHECK(a[i].failures == 0);
  }

  SamplerConfig impossible;
  impossible.angle_floor = 0.8;
  CHECK_THROWS_AS(batch_check(recs, p, impossible, 3, 7), SamplerExhausted);
}

TEST_CASE("errata fail where the corrected forms hold") {
  const SystemParams p = kc4();
  const auto recs = builtin_identities(p);
  for (const char *id : {"K1'=-5/4 K1[printed]", "J0=J0_cart[printed]", "R2'=-5/4 R2[printed]"}) {
    const auto st = batch_check({find(recs, id)}, p, {}, 10, 7).front();
    CAPTURE(id);
    CHECK(st.max_residual > 1e-3);
  }
}

TEST_CASE("independence rank") {
  const SystemParams p4 = kc4(), p3 = kc3({5, 3}, {3, 5});
  for (const Vec6 &x : sample_points(p4, 79, 10)) {
    CHECK(independence_rank({"H", "H", "L2"}, p4, x) == 2);
    CHECK(independence_rank(generator_set(p4), p4, x) == 5);
    CHECK(independence_rank({"H", "L2", "L3", "J0", "K0", "J0_prime"}, p4, x) == 5);
  }
  for (const Vec6 &x : sample_points(p3, 79, 10)) CHECK(independence_rank(generator_set(p3, true), p3, x) == 5);
  CHECK(generator_set(p3) == std::vector<std::string>{"H", "L2", "L3", "J1", "K0"});
  CHECK(generator_set(p4) == std::vector<std::string>{"H", "L2", "L3", "J0", "K0"});
}

TEST_CASE("bracket axioms hold across the catalog") {
  for (const SystemParams &p : {kc3({1, 3}, {1, 1}), kc4({3, 1}, {5, 3})}) {
    const auto ax = bracket_axioms(p, 20, 83);
    CHECK(ax.antisymmetry == 0.0);
    CHECK(ax.leibniz < 1e-10);
    CHECK(ax.jacobi < 1e-6);
  }
}

TEST_CASE("Jacobi identity on non-constant block functions") {
  const SystemParams p = kc4({1, 3}, {5, 3});
  for (const Vec6 &x : sample_points(p, 89, 20)) {
    const Context c(x, p);
    const Tracked s = c.pb("X1", c.pb1("Y2bar", "U1")) + c.pb("Y2bar", c.pb1("U1", "X1")) + c.pb("U1", c.pb1("X1", "Y2bar"));
    CHECK(std::abs(s.v) < 1e-10 * std::max(s.m, 1.0));
  }
}

TEST_CASE("tolerances from the environment") {
  const Tolerances t;
  CHECK(t.jet == 1e-8);
  CHECK(t.nested == 1e-6);
  CHECK(t.relation == 1e-5);
  CHECK(t.of(Tier::Nested) == 1e-6);
}
