#include "kc/identities.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace kc {

namespace {

const Tracked I{cplx(0.0, 1.0)};
const Tracked zero{0.0};

bool any_kc(const SystemParams &p) { return p.kc3() || p.kc4(); }
bool only_kc3(const SystemParams &p) { return p.kc3(); }
bool only_kc4(const SystemParams &p) { return p.kc4(); }
bool euclid(const SystemParams &p) { return p.euclidean(); }

Tracked sq(const Tracked &a) { return a * a; }

double env_or(const char *name, double fallback) {
  const char *s = std::getenv(name);
  if (!s || !*s) return fallback;
  char *end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || !(v > 0.0)) throw ConfigError(std::string("bad value for ") + name);
  return v;
}

// R0^2 = 4096 H^4 poly and K1 R0 = 64 H^2 poly share this polynomial
Tracked r0_poly(const Context &c) {
  const auto &p = c.params();
  const double b = p.beta, g = p.gamma, d = p.delta;
  const Tracked K0 = c("K0"), l2 = c("L2"), l3 = c("L3");
  return -sq(K0) * l3 - 4 * b * K0 * l2 + 4 * b * d * K0 + 4 * l3 * l3 * l3 - 4 * g * d * K0 + 4 * g * K0 * l2 -
         8 * b * l2 * l2 - 8 * g * l2 * l2 + 4 * l3 * l2 * l2 - 8 * l3 * l3 * l2 + 4 * b * b * l3 - 8 * b * l3 * l3 +
         4 * g * g * l3 - 8 * g * l3 * l3 - 8 * d * l3 * l3 + 4 * d * d * l3 + 16 * b * g * d + 16 * g * d * l2 +
         16 * b * d * l2 + 16 * b * g * l2 - 8 * b * b * l2 + 16 * b * l3 * l2 - 8 * g * g * l2 + 16 * g * l3 * l2 -
         8 * d * l3 * l2 - 8 * b * g * l3 - 8 * b * b * d + 16 * b * d * l3 - 8 * g * g * d + 16 * g * d * l3 -
         8 * b * d * d - 8 * g * d * d;
}

Tracked r0_iform(const Context &c, bool printed) {
  const auto &p = c.params();
  const double b = p.beta, g = p.gamma, d = p.delta;
  const Tracked x = c("I_xy"), y = c("I_xz"), z = c("I_yz"), h = c("H");
  Tracked v = x * y * z - b * z * (x + y) - g * y * (x + z) - d * x * (y + z) - b * z * z - g * y * y - d * x * x +
              (b * (b + 3 * g + 3 * d) + g * d) * z + (g * (g + 3 * d + 3 * b) + d * b) * y +
              (d * (d + 3 * b + 3 * g) + b * g) * x - 2 * (b * g * g + b * b * g + b * d * d + b * b * d + g * d * d + g * g * d);
  if (!printed) v = v - 4 * b * g * d;
  return 65536 * sq(sq(h)) * v;
}

Tracked j1r0_rhs(const Context &c, bool printed) {
  const auto &p = c.params();
  const double b = p.beta, g = p.gamma, d = p.delta, a2 = p.alpha * p.alpha;
  const Tracked K0 = c("K0"), l2 = c("L2"), l3 = c("L3"), J0 = c("J0"), J0p = c("J0_prime"), h = c("H");
  const Tracked dl = l2 - l3;
  const double cj0 = printed ? (-6 * g + 4 * d) : (6 * b - 6 * g + 4 * d);
  const double cj0p = printed ? (6 * b + 4 * d) : 8 * d;
  return 32 * sq(h) *
         ((-2 * sq(dl) + (l2 + l3) * K0) * J0 - 4 * sq(dl) * J0p + (cj0 * l2 + 2 * (-b + g + 2 * d) * l3 - d * K0) * J0 +
          (cj0p * l2 + 8 * d * l3) * J0p + 2 * d * (b - g - d) * J0 - 4 * d * d * J0p +
          a2 * (4 * sq(dl) + (2 * l2 - 6 * l3) * K0) + a2 * (-4 * (b - g + 2 * d) * (l2 + l3) - 2 * d * K0) +
          4 * a2 * d * (5 * b - 5 * g + d));
}

// the J1 and K1 coefficients of Q*R3 = A*J1 + B*K1 (KC4)
struct R3Coeffs {
  Tracked A, B;
};

R3Coeffs r3_coeffs(const Context &c) {
  const auto &p = c.params();
  const double d = p.delta;
  const int p1 = p.k1.p, q1 = p.k1.q, p2 = p.k2.p;
  const Tracked l2 = c("L2"), l3 = c("L3"), K0 = c("K0"), J0 = c("J0"), Q = c("Q");
  const Tracked dD2 = dD2_dL2(l2, l3, p), dD1 = dD1_dL3(l2, l3, p);
  R3Coeffs r;
  r.A = -4.0 * q1 * p1 * p2 * (l3 * K0 + c("D2")) * (l2 - l3 - d) / l3 + 4.0 * p1 * Q * dD2 / l3;
  r.B = -4.0 * q1 * p1 * p2 * (l2 * J0 + c("D1")) * (l2 - l3 + d) / l2 - 4.0 * p1 * p2 * Q * dD1 / l2;
  return r;
}

} // namespace

Tolerances Tolerances::from_env() {
  Tolerances t;
  t.jet = env_or("KC_TOL_JET", t.jet);
  t.nested = env_or("KC_TOL_NESTED", t.nested);
  t.relation = env_or("KC_TOL_RELATION", t.relation);
  return t;
}

Context::Context(const Vec6 &x, const SystemParams &p) : p_(p), c_(evaluate_catalog(lift_point<J2t>(x), p)) {}

const J2t &Context::at(const std::string &n) const {
  const auto it = c_.find(n);
  if (it == c_.end()) throw std::out_of_range("observable '" + n + "' not in catalog");
  return it->second;
}

double residual(const Sides &s) {
  return std::abs(s.lhs.v - s.rhs.v) / std::max({s.lhs.m, s.rhs.m, 1.0});
}

double plain_residual(const Sides &s) {
  return std::abs(s.lhs.v - s.rhs.v) / std::max({std::abs(s.lhs.v), std::abs(s.rhs.v), 1.0});
}

std::vector<IdentityRecord> builtin_identities(const SystemParams &p, bool include_errata) {
  std::vector<IdentityRecord> out;
  auto add = [&](std::string id, std::string group, std::string ref, Tier tier,
                 std::function<bool(const SystemParams &)> applies, std::function<Sides(const Context &)> eval,
                 bool erratum = false, std::string note = {}) {
    if (!applies(p) || (erratum && !include_errata)) return;
    out.push_back({std::move(id), std::move(group), std::move(ref), tier, erratum, std::move(note), std::move(applies),
                   std::move(eval)});
  };
  auto vanish = [&](const std::string &a, const std::string &b, std::string group, std::string ref,
                    std::function<bool(const SystemParams &)> applies) {
    add("{" + a + "," + b + "}=0", group, ref, Tier::Jet, applies,
        [a, b](const Context &c) { return Sides{c.pb(a, b), zero}; });
  };

  const int p1 = p.k1.p, q1 = p.k1.q, p2 = p.k2.p;
  const double d = p.delta;

  // (a) involution and conservation
  const std::string ra = "constants of the motion";
  vanish("H", "L2", "a", "separation constants in involution", any_kc);
  vanish("H", "L3", "a", "separation constants in involution", any_kc);
  vanish("L2", "L3", "a", "separation constants in involution", any_kc);
  for (const char *n : {"J_plus", "J_minus", "K_plus", "K_minus", "J1", "J2", "K1", "K2", "K0"})
    vanish("H", n, "a", ra, any_kc);
  vanish("H", "J0", "a", ra, only_kc4);
  vanish("H", "J_plus_ratio", "a", "exp(q1 A1 - p1 B1) is a constant of the motion", only_kc3);

  // (b) products
  add("J+J-=P1", "b", "product identity J+J- = P1", Tier::Jet, any_kc,
      [](const Context &c) { return Sides{c("J_plus") * c("J_minus"), c("P1")}; });
  add("K+K-=P2", "b", "product identity K+K- = P2", Tier::Jet, any_kc,
      [](const Context &c) { return Sides{c("K_plus") * c("K_minus"), c("P2")}; });
  add("J+J-=P1[printed 2q1]", "b", "KC3 summary block, P1 exponent", Tier::Jet, only_kc3,
      [](const Context &c) {
        const auto &p = c.params();
        const Tracked e = p.alpha * p.alpha + 4.0 * c("H") * c("L2");
        return Sides{c("J_plus") * c("J_minus"), ipow(Tracked(c("L2") - c("L3")), 2 * p.k1.q) * ipow(e, p.k1.p)};
      },
      true, "exponent of (L2-L3) is q1, not 2q1");
  for (const char *j : {"1", "2"}) {
    const std::string X = std::string("X") + j, Y = std::string("Y") + j;
    add(X + "*" + X + "bar=U" + j + "^2", "b", "block display", Tier::Jet, any_kc,
        [X, j](const Context &c) { return Sides{c(X) * c(X + "bar"), sq(c(std::string("U") + j))}; });
    add(Y + "*" + Y + "bar=S" + j + "^2", "b", "block display", Tier::Jet, any_kc,
        [Y, j](const Context &c) { return Sides{c(Y) * c(Y + "bar"), sq(c(std::string("S") + j))}; });
  }
  add("X2*X2bar=U2^2[printed]", "b", "KC3 block display, U2", Tier::Jet, only_kc3,
      [](const Context &c) { return Sides{c("X2") * c("X2bar"), -Wpoly(c("L3"), c.params())}; }, true,
      "U2 radicand is (beta-gamma-L3)^2-4 gamma L3; printed with the opposite overall sign");

  // (c) grading
  const double cJ = p.kc3() ? 2.0 : 4.0;
  vanish("L3", "J_plus", "c", "grading", any_kc);
  vanish("L3", "J_minus", "c", "grading", any_kc);
  vanish("L2", "K_plus", "c", "grading", any_kc);
  vanish("L2", "K_minus", "c", "grading", any_kc);
  add("{L2,J+}", "c", "grading", Tier::Jet, any_kc, [=](const Context &c) {
    return Sides{c.pb("L2", "J_plus"), -cJ * p1 * I * sqrt(c("L2")) * c("J_plus")};
  });
  add("{L2,J-}", "c", "grading", Tier::Jet, any_kc, [=](const Context &c) {
    return Sides{c.pb("L2", "J_minus"), cJ * p1 * I * sqrt(c("L2")) * c("J_minus")};
  });
  add("{L3,K+}", "c", "grading", Tier::Jet, any_kc, [=](const Context &c) {
    return Sides{c.pb("L3", "K_plus"), -4.0 * p1 * p2 * I * sqrt(c("L3")) * c("K_plus")};
  });
  add("{L3,K-}", "c", "grading", Tier::Jet, any_kc, [=](const Context &c) {
    return Sides{c.pb("L3", "K_minus"), 4.0 * p1 * p2 * I * sqrt(c("L3")) * c("K_minus")};
  });

  // (d) diagonal brackets, with closed-form partials of P1, P2
  add("{J+,J-}", "d", "diagonal bracket", Tier::Jet, any_kc, [=](const Context &c) {
    const auto &q = c.params();
    return Sides{c.pb("J_plus", "J_minus"), cJ * p1 * I * sqrt(c("L2")) * dP1_dL2(c("H"), c("L2"), c("L3"), q)};
  });
  add("{K+,K-}", "d", "diagonal bracket", Tier::Jet, any_kc, [=](const Context &c) {
    const auto &q = c.params();
    return Sides{c.pb("K_plus", "K_minus"), 4.0 * p1 * p2 * I * sqrt(c("L3")) * dP2_dL3(c("H"), c("L2"), c("L3"), q)};
  });

  // (e) cross brackets {J,K} = ratio * J K
  struct Cross {
    const char *j, *k;
    double sign;
    bool same;  // J+K+ / J-K- pair
  };
  for (const Cross x : {Cross{"J_plus", "K_plus", 1.0, true}, Cross{"J_minus", "K_minus", -1.0, true},
                        Cross{"J_plus", "K_minus", 1.0, false}, Cross{"J_minus", "K_plus", -1.0, false}}) {
    add(std::string("{") + x.j + "," + x.k + "}", "e", "cross-bracket ratios, summary block", Tier::Jet, any_kc,
        [=](const Context &c) {
          const auto &q = c.params();
          const Tracked l2 = c("L2"), l3 = c("L3"), s2 = sqrt(l2), s3 = sqrt(l3);
          Tracked ratio;
          if (q.kc3()) {
            ratio = 2.0 * q1 * p1 * p2 * I / (l2 - l3) * (x.same ? s2 + s3 : s2 - s3);
          } else {
            const Tracked f = 4.0 * q1 * p1 * p2 * I / c("Q");
            ratio = x.same ? f * (s2 - s3) * (l2 + 2.0 * s2 * s3 + l3 - q.delta)
                           : f * (s2 + s3) * (l2 - 2.0 * s2 * s3 + l3 - q.delta);
          }
          return Sides{c.pb(x.j, x.k), x.sign * ratio * c(x.j) * c(x.k)};
        });
  }

  // (f) quadratic relations
  add("J2^2=-L2 J1^2+4P1", "f", "quadratic relation", Tier::Jet, any_kc,
      [](const Context &c) { return Sides{sq(c("J2")), -c("L2") * sq(c("J1")) + 4.0 * c("P1")}; });
  add("K2^2=-L3 K1^2+4P2", "f", "quadratic relation", Tier::Jet, any_kc,
      [](const Context &c) { return Sides{sq(c("K2")), -c("L3") * sq(c("K1")) + 4.0 * c("P2")}; });

  // (g) polynomial-basis brackets
  vanish("L3", "J1", "g", "polynomial structure relations", any_kc);
  vanish("L2", "K1", "g", "polynomial structure relations", any_kc);
  if (p.kc3()) {
    const std::string r = "KC3 polynomial structure relations";
    const double cm = 2.0 * q1 * p1 * p2;
    add("{L2,J2}", "g", r, Tier::Jet, only_kc3,
        [=](const Context &c) { return Sides{c.pb("L2", "J2"), 2.0 * p1 * c("L2") * c("J1")}; });
    add("{L2,J1}", "g", r, Tier::Jet, only_kc3,
        [=](const Context &c) { return Sides{c.pb("L2", "J1"), -2.0 * p1 * c("J2")}; });
    add("{L3,K2}", "g", r, Tier::Jet, only_kc3,
        [=](const Context &c) { return Sides{c.pb("L3", "K2"), -4.0 * p1 * p2 * c("L3") * c("K1")}; });
    add("{L3,K1}", "g", r, Tier::Jet, only_kc3,
        [=](const Context &c) { return Sides{c.pb("L3", "K1"), 4.0 * p1 * p2 * c("K2")}; });
    add("{J2,J1}", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J2", "J1"), p1 * sq(c("J1")) - 4.0 * p1 * dP1_dL2(c("H"), c("L2"), c("L3"), c.params())};
    });
    add("{J2,J1}[printed]", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J2", "J1"), -p1 * sq(c("J1")) - 4.0 * p1 * dP1_dL2(c("H"), c("L2"), c("L3"), c.params())};
    }, true, "sign of the p1 J1^2 term is +");
    add("{K2,K1}", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("K2", "K1"),
                   -2.0 * p1 * p2 * sq(c("K1")) + 8.0 * p1 * p2 * dP2_dL3(c("H"), c("L2"), c("L3"), c.params())};
    });
    add("{J1,K1}", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J1", "K1"), cm / (c("L2") - c("L3")) * (-c("J1") * c("K2") + c("J2") * c("K1"))};
    });
    add("{J2,K1}", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J2", "K1"), -cm / (c("L2") - c("L3")) * (c("J2") * c("K2") + c("L2") * c("J1") * c("K1"))};
    });
    add("{J2,K1}[printed]", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J2", "K1"), cm / (c("L2") - c("L3")) * (c("J2") * c("K2") + c("L2") * c("J1") * c("K1"))};
    }, true, "overall sign is -");
    add("{J1,K2}", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J1", "K2"), cm / (c("L2") - c("L3")) * (c("L3") * c("J1") * c("K1") + c("J2") * c("K2"))};
    });
    add("{J1,K2}[printed]", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J1", "K2"), cm / (c("L2") - c("L3")) * (c("L3") * c("K1") + c("J2") * c("K2"))};
    }, true, "first term is L3 J1 K1");
    add("{J2,K2}", "g", r, Tier::Jet, only_kc3, [=](const Context &c) {
      return Sides{c.pb("J2", "K2"),
                   cm / (c("L2") - c("L3")) * (c("L3") * c("J2") * c("K1") - c("L2") * c("J1") * c("K2"))};
    });
  } else {
    const std::string r = "KC4 polynomial structure relations";
    const double cm = 4.0 * q1 * p1 * p2;
    add("{L2,J2}", "g", r, Tier::Jet, only_kc4,
        [=](const Context &c) { return Sides{c.pb("L2", "J2"), 4.0 * p1 * c("L2") * c("J1")}; });
    add("{L2,J1}", "g", r, Tier::Jet, only_kc4,
        [=](const Context &c) { return Sides{c.pb("L2", "J1"), -4.0 * p1 * c("J2")}; });
    add("{L3,K2}", "g", r, Tier::Jet, only_kc4,
        [=](const Context &c) { return Sides{c.pb("L3", "K2"), 4.0 * p1 * p2 * c("L3") * c("K1")}; });
    add("{L3,K1}", "g", r, Tier::Jet, only_kc4,
        [=](const Context &c) { return Sides{c.pb("L3", "K1"), -4.0 * p1 * p2 * c("K2")}; });
    add("{J1,J2}", "g", r, Tier::Jet, only_kc4, [=](const Context &c) {
      return Sides{c.pb("J1", "J2"), -2.0 * p1 * sq(c("J1")) + 8.0 * p1 * dP1_dL2(c("H"), c("L2"), c("L3"), c.params())};
    });
    add("{K1,K2}", "g", r, Tier::Jet, only_kc4, [=](const Context &c) {
      return Sides{c.pb("K1", "K2"),
                   -2.0 * p1 * p2 * sq(c("K1")) + 8.0 * p1 * p2 * dP2_dL3(c("H"), c("L2"), c("L3"), c.params())};
    });
    add("{J1,K1}", "g", r, Tier::Jet, only_kc4, [=](const Context &c) {
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c.pb("J1", "K1"), cm / c("Q") * (c("J1") * c("K2") * (l2 - l3 + d) + c("J2") * c("K1") * (l2 - l3 - d))};
    });
    add("{J1,K2}", "g", r, Tier::Jet, only_kc4, [=](const Context &c) {
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c.pb("J1", "K2"),
                   -cm / c("Q") * (c("J1") * c("K1") * l3 * (l2 - l3 + d) + c("J2") * c("K2") * (-l2 + l3 + d))};
    });
    add("{J2,K2}", "g", r, Tier::Jet, only_kc4, [=](const Context &c) {
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c.pb("J2", "K2"),
                   -cm / c("Q") * (c("J1") * c("K2") * l2 * (l2 - l3 - d) + c("J2") * c("K1") * l3 * (l2 - l3 + d))};
    });
    add("{J2,K1}", "g", r, Tier::Jet, only_kc4, [=](const Context &c) {
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c.pb("J2", "K1"),
                   -cm / c("Q") * (c("J1") * c("K1") * l2 * (l2 - l3 - d) + c("J2") * c("K2") * (-l2 + l3 - d))};
    });
  }

  // (h) minimal generators
  add("K2=L3 K0+D2", "h", "minimal generator K0", Tier::Jet, any_kc,
      [](const Context &c) { return Sides{c("K2"), c("L3") * c("K0") + c("D2")}; });
  vanish("L2", "K0", "h", "minimal generator K0", any_kc);
  add("{L3,K0}", "h", "R2 = {L3,K0}", Tier::Jet, any_kc, [=](const Context &c) {
    const double s = c.params().kc3() ? -4.0 : 4.0;
    return Sides{c.pb("L3", "K0"), s * p1 * p2 * c("K1")};
  });
  add("R2^2", "h", "R2 squared in the generators", Tier::Jet, any_kc, [=](const Context &c) {
    const Tracked l3 = c("L3"), K0 = c("K0"), D2 = c("D2");
    return Sides{sq(c("K1")), (-sq(l3 * K0 + D2) + 4.0 * c("P2")) / l3};
  });
  add("R2^2[printed P1]", "h", "KC3 R2 squared", Tier::Jet, only_kc3, [=](const Context &c) {
    const Tracked l3 = c("L3");
    return Sides{sq(c("K1")), (-sq(l3 * c("K0") + c("D2")) + 4.0 * c("P1")) / l3};
  }, true, "the last term is 4 P2");
  if (p.kc4()) {
    add("J2=L2 J0+D1", "h", "minimal generator J0", Tier::Jet, only_kc4,
        [](const Context &c) { return Sides{c("J2"), c("L2") * c("J0") + c("D1")}; });
    vanish("L3", "J0", "h", "R1 = {L2,J0}", only_kc4);
    add("{L2,J0}", "h", "R1 = {L2,J0}", Tier::Jet, only_kc4,
        [=](const Context &c) { return Sides{c.pb("L2", "J0"), 4.0 * p1 * c("J1")}; });
    add("R1^2", "h", "R1 squared in the generators", Tier::Jet, only_kc4, [](const Context &c) {
      const Tracked l2 = c("L2"), J0 = c("J0"), D1 = c("D1");
      return Sides{sq(c("J1")), -l2 * sq(J0) - 2.0 * D1 * J0 + (4.0 * c("P1") - sq(D1)) / l2};
    });
    add("R3", "h", "Q R3 = A J1 + B K1", Tier::Jet, only_kc4, [=](const Context &c) {
      const auto &q = c.params();
      const Tracked l2 = c("L2"), l3 = c("L3"), Q = c("Q");
      const Tracked rhs = -4.0 * q1 * p1 * p2 / (l2 * l3) *
                              (c("J1") * (l3 * c("K0") + c("D2")) * l2 * (l2 - l3 - d) +
                               (l2 * c("J0") + c("D1")) * c("K1") * l3 * (l2 - l3 + d)) +
                          4.0 * p1 / (l2 * l3) * Q *
                              (l2 * c("J1") * dD2_dL2(l2, l3, q) - p2 * l3 * c("K1") * dD1_dL3(l2, l3, q));
      return Sides{Q * c.pb("J0", "K0"), rhs};
    });
    add("R3=A J1+B K1", "h", "Q R3 = A J1 + B K1", Tier::Jet, only_kc4, [](const Context &c) {
      const auto r = r3_coeffs(c);
      return Sides{c("Q") * c.pb("J0", "K0"), r.A * c("J1") + r.B * c("K1")};
    });
    add("{L2,R3}", "h", "Q {L2,R3}", Tier::Nested, only_kc4, [=](const Context &c) {
      const auto r = r3_coeffs(c);
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c("Q") * c.pb("L2", c.pb1("J0", "K0")),
                   -4.0 * p1 * r.A * (l2 * c("J0") + c("D1")) -
                       16.0 * q1 * p1 * p1 * p2 * (l2 - l3 + d) * c("J1") * c("K1")};
    });
    add("{L2,R3}[printed]", "h", "Q {L2,R3}", Tier::Nested, only_kc4, [=](const Context &c) {
      const auto r = r3_coeffs(c);
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c("Q") * c.pb("L2", c.pb1("J0", "K0")),
                   4.0 * p1 * r.A * (l2 * c("J0") + c("D1")) -
                       16.0 * q1 * p1 * p1 * p2 * (l2 - l3 + d) * c("J1") * c("K1")};
    }, true, "first term carries {L2,J1} = -4 p1 J2, so its sign is -");
    add("{L3,R3}", "h", "Q {L3,R3}", Tier::Nested, only_kc4, [=](const Context &c) {
      const auto r = r3_coeffs(c);
      const Tracked l2 = c("L2"), l3 = c("L3");
      return Sides{c("Q") * c.pb("L3", c.pb1("J0", "K0")),
                   -4.0 * p1 * p2 * r.B * (l3 * c("K0") + c("D2")) -
                       16.0 * q1 * p1 * p1 * p2 * p2 * (l2 - l3 - d) * c("J1") * c("K1")};
    });
    add("{L2,R1}", "h", "(1/4p1){L2,R1} = {L2,J1}", Tier::Nested, only_kc4, [=](const Context &c) {
      return Sides{c.pb("L2", c.pb1("L2", "J0")) / (4.0 * p1), -4.0 * p1 * (c("L2") * c("J0") + c("D1"))};
    });
    add("{L2,R1}[printed]", "h", "(1/4p1){L2,R1} = {L2,J1}", Tier::Nested, only_kc4, [=](const Context &c) {
      return Sides{c.pb("L2", c.pb1("L2", "J0")) / (4.0 * p1), 4.0 * p1 * (c("L2") * c("J0") + c("D1"))};
    }, true, "equals -4 p1 J2 = -4 p1 (L2 J0 + D1)");
    add("{L3,R1}", "h", "(1/4p1){L3,R1} = 0", Tier::Nested, only_kc4,
        [=](const Context &c) { return Sides{c.pb("L3", c.pb1("L2", "J0")) / (4.0 * p1), zero}; });
    auto j0r1 = [=](const Context &c, double middle) {
      const auto &q = c.params();
      const Tracked l2 = c("L2"), J2 = c("J2");
      const Tracked dD1overL2 = -c("D1") / sq(l2);
      return (2.0 * p1 * sq(c("J1")) - 8.0 * p1 * dP1_dL2(c("H"), l2, c("L3"), q)) / l2 +
             middle * p1 * dD1overL2 * J2 + 4.0 * p1 * sq(J2) / sq(l2);
    };
    add("{J0,R1}", "h", "(1/4p1){J0,R1} = {J0,J1}", Tier::Nested, only_kc4, [=](const Context &c) {
      return Sides{c.pb("J0", c.pb1("L2", "J0")) / (4.0 * p1), j0r1(c, 4.0)};
    });
    add("{J0,R1}[printed]", "h", "(1/4p1){J0,R1} = {J0,J1}", Tier::Nested, only_kc4, [=](const Context &c) {
      return Sides{c.pb("J0", c.pb1("L2", "J0")) / (4.0 * p1), j0r1(c, 2.0)};
    }, true, "coefficient of d(D1/L2)/dL2 J2 is 4 p1");
    add("{K0,R1}", "h", "(1/4p1){K0,R1} = {K0,J1}", Tier::Nested, only_kc4, [=](const Context &c) {
      const auto &q = c.params();
      const Tracked l2 = c("L2"), l3 = c("L3");
      const Tracked rhs = 4.0 * q1 * p1 * p2 / (l3 * c("Q")) *
                              (c("J1") * c("K1") * l3 * (l2 - l3 + d) + c("J2") * c("K2") * (-l2 + l3 + d)) +
                          4.0 * p1 * c("J2") / l3 * dD2_dL2(l2, l3, q);
      return Sides{c.pb("K0", c.pb1("L2", "J0")) / (4.0 * p1), rhs};
    });
  }

  // (i) Euclidean case k1 = k2 = 1
  if (p.euclidean()) {
    const std::string r = "Euclidean case";
    const double be = p.beta, ga = p.gamma, a2 = p.alpha * p.alpha;
    add("L2=I_xy+I_xz+I_yz-(b+g+d)", "i", r, Tier::Jet, euclid, [=](const Context &c) {
      return Sides{c("L2"), c("I_xy") + c("I_xz") + c("I_yz") - (be + ga + d)};
    });
    add("L3=I_xy", "i", r, Tier::Jet, euclid, [](const Context &c) { return Sides{c("L3"), c("I_xy")}; });
    add("L3'=I_yz", "i", r, Tier::Jet, euclid, [](const Context &c) { return Sides{c("L3_prime"), c("I_yz")}; });
    add("K0=2(I_yz-I_xz)", "i", r, Tier::Jet, euclid,
        [](const Context &c) { return Sides{c("K0"), 2.0 * (c("I_yz") - c("I_xz"))}; });
    for (const char *n : {"I_xy", "I_xz", "I_yz", "J0_prime", "J0_dprime"}) vanish("H", n, "i", r, euclid);
    vanish("H", "M3", "i", "M3 is conserved when delta = 0",
           [](const SystemParams &q) { return q.euclidean() && q.delta == 0.0; });
    add("J0=J0_cart", "i", r + ", Cartesian J0", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c("J0"), c("J0_cart")}; });
    add("J0=J0_cart[printed]", "i", r + ", Cartesian J0", Tier::Jet, euclid,
        [=](const Context &c) { return Sides{c("J0"), c("J0_cart") - 8.0 * d * c("H")}; }, true,
        "the 8H(...) factor subtracts beta+gamma only");
    add("J0'[printed]", "i", r + ", Cartesian J0'", Tier::Jet, euclid,
        [=](const Context &c) {
          return Sides{c("J0") + c("J0_prime") - 8.0 * be * c("H") + c("J0_dprime_cart"), Tracked(2.0 * a2)};
        },
        true, "the 8H(...) factor subtracts gamma+delta only");
    add("Jident", "i", r + ", J0+J0'+J0''=2a^2", Tier::Jet, euclid, [=](const Context &c) {
      return Sides{c("J0") + c("J0_prime") + c("J0_dprime_cart"), Tracked(2.0 * a2)};
    });
    add("K1'=-K1", "i", r + ", primed basis", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c.pb("L3_prime", "K0_prime") / 4.0, -c("K1")}; });
    add("K1'=-5/4 K1[printed]", "i", r + ", primed basis", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c.pb("L3_prime", "K0_prime") / 4.0, -1.25 * c("K1")}; }, true,
        "observed ratio is -1");
    add("R2'=-R2", "i", r + ", primed basis", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c.pb("L3_prime", "K0_prime"), -c.pb("L3", "K0")}; });
    add("R2'=-5/4 R2[printed]", "i", r + ", primed basis", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c.pb("L3_prime", "K0_prime"), -1.25 * c.pb("L3", "K0")}; }, true,
        "observed ratio is -1");
    vanish("L3_prime", "J0_prime", "i", r + ", primed basis", euclid);
    add("{L3,J0'}=0[printed]", "i", r + ", primed basis", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c.pb("L3", "J0_prime"), zero}; }, true,
        "holds with the primed L3' in place of L3");
    add("J1K1", "i", r + ", J1 K1 closure with S", Tier::Jet, euclid, [=](const Context &c) {
      const Tracked l2 = c("L2"), l3 = c("L3"), J0 = c("J0"), K0 = c("K0");
      return Sides{c("J1") * c("K1"), 0.5 * (l2 + l3 - d) * J0 * K0 + a2 * (l2 - 3.0 * l3 - d) * K0 +
                                          (be - ga) * (3.0 * l2 - l3 + d) * J0 +
                                          2.0 * a2 * (ga - be) * (l2 + l3 - 5.0 * d) + c("S_closure") * c("Q")};
    });
    add("K0R11", "i", r + ", {K0,J1} with S", Tier::Jet, euclid, [=](const Context &c) {
      return Sides{c.pb("K0", "J1"), -2.0 * (2.0 * (ga - be) + c("K0")) * (c("J0") - 2.0 * a2) +
                                         4.0 * (c("L2") - c("L3") + d) * c("S_closure")};
    });
    add("{K0,J1}=-1/4{L2,R3}", "i", r, Tier::Nested, euclid, [](const Context &c) {
      return Sides{c.pb("K0", "J1"), -0.25 * c.pb("L2", c.pb1("J0", "K0"))};
    });
    add("{J1,J0}", "i", r, Tier::Jet, euclid, [=](const Context &c) {
      const Tracked h = c("H"), l2 = c("L2"), l3 = c("L3"), J0 = c("J0");
      return Sides{c.pb("J1", "J0"), -2.0 * sq(J0) +
                                         128.0 * sq(h) * (3.0 * sq(l2) + sq(l3) - 4.0 * d * l2 - 2.0 * d * l3 -
                                                          4.0 * l2 * l3 + d * d) +
                                         128.0 * a2 * h * (l2 - l3 - d) + 8.0 * a2 * a2};
    });
    add("{L2,R0}=0", "i", r + ", R0 = {J0,J0'}", Tier::Nested, euclid,
        [](const Context &c) { return Sides{c.pb("L2", c.pb1("J0", "J0_prime")), zero}; });
    add("R0^2", "i", r + ", R0 squared", Tier::Jet, euclid, [](const Context &c) {
      return Sides{sq(c.pb("J0", "J0_prime")), 4096.0 * sq(sq(c("H"))) * r0_poly(c)};
    });
    add("R0^2 I-form", "i", r + ", R0 squared via I", Tier::Jet, euclid,
        [](const Context &c) { return Sides{sq(c.pb("J0", "J0_prime")), r0_iform(c, false)}; });
    add("R0^2 I-form[printed]", "i", r + ", R0 squared via I", Tier::Jet, euclid,
        [](const Context &c) { return Sides{sq(c.pb("J0", "J0_prime")), r0_iform(c, true)}; }, true,
        "constant term needs an extra -4 beta gamma delta");
    add("K1R0", "i", r + ", K1 R0", Tier::Jet, euclid, [](const Context &c) {
      return Sides{c("K1") * c.pb("J0", "J0_prime"), 64.0 * sq(c("H")) * r0_poly(c)};
    });
    add("K1R0[printed]", "i", r + ", K1 R0", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c("K1") * c.pb("J0", "J0_prime"), r0_poly(c)}; }, true,
        "missing factor 64 H^2");
    add("J1R0", "i", r + ", J1 R0", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c("J1") * c.pb("J0", "J0_prime"), j1r0_rhs(c, false)}; });
    add("J1R0[printed]", "i", r + ", J1 R0", Tier::Jet, euclid,
        [](const Context &c) { return Sides{c("J1") * c.pb("J0", "J0_prime"), j1r0_rhs(c, true)}; }, true,
        "J0 L2 coefficient is 6b-6g+4d and J0' L2 coefficient is 8d");
    add("{J0,R0}", "i", r + ", {J0,R0}", Tier::Nested, euclid, [=](const Context &c) {
      const Tracked J0p = c("J0_prime"), J0pp = c("J0_dprime"), Iyz = c("I_yz"), Ixz = c("I_xz");
      return Sides{c.pb("J0", c.pb1("J0", "J0_prime")),
                   512.0 * sq(c("H")) *
                       ((J0p * Iyz - J0pp * Ixz) + d * (J0pp - J0p) - ga * J0p + be * J0pp +
                        2.0 * a2 * (Ixz - Iyz) - 2.0 * a2 * (be - ga))};
    });
  }
  return out;
}

double check_identity(const IdentityRecord &rec, const Vec6 &x, const SystemParams &p) {
  if (!admissible(x, p)) throw InadmissiblePoint("point violates the admissibility floors");
  return residual(rec.eval(Context(x, p)));
}

std::vector<ResidualStats> batch_check(const std::vector<IdentityRecord> &recs, const SystemParams &p,
                                       const SamplerConfig &cfg, int n, std::uint64_t seed, const Tolerances &tol) {
  const auto pts = sample_points(p, seed, n, cfg);
  std::vector<std::vector<double>> res(recs.size()), plain(recs.size());
  for (const auto &x : pts) {
    const Context ctx(x, p);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const Sides s = recs[i].eval(ctx);
      res[i].push_back(residual(s));
      plain[i].push_back(plain_residual(s));
    }
  }
  std::vector<ResidualStats> out;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ResidualStats st;
    st.id = recs[i].id;
    st.group = recs[i].group;
    st.ref = recs[i].ref;
    st.note = recs[i].note;
    st.erratum = recs[i].erratum;
    st.tier = recs[i].tier;
    st.points = n;
    st.tolerance = tol.of(recs[i].tier);
    auto v = res[i];
    for (double r : v)
      if (!(r <= st.tolerance)) ++st.failures;
    st.max_residual = *std::max_element(v.begin(), v.end(), [](double a, double b) { return a < b || std::isnan(b); });
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    st.median_residual = v[v.size() / 2];
    st.max_plain_residual = *std::max_element(plain[i].begin(), plain[i].end());
    out.push_back(st);
  }
  return out;
}

DegreeEstimate momentum_degree(const std::string &name, const SystemParams &p, const Vec6 &x, double lambda0) {
  std::array<double, 4> lx{}, ly{};
  for (int k = 0; k < 4; ++k) {
    const double lam = lambda0 * double(2 << k);
    Vec6 y = x;
    y.tail<3>() *= lam;
    double f = 1.0;
    if (name != "1") {
      const auto c = evaluate_catalog(lift_point<cplx>(y), p);
      const auto it = c.find(name);
      if (it == c.end()) throw std::out_of_range("observable '" + name + "' not in catalog");
      f = std::abs(it->second);
    }
    if (!(f > 0.0) || !std::isfinite(f)) throw NotPolynomial(name + ": value vanishes or overflows under scaling");
    lx[k] = std::log(lam);
    ly[k] = std::log(f);
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4.0, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4.0;
  double sxy = 0.0, sxx = 0.0;
  for (int k = 0; k < 4; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  DegreeEstimate e;
  e.slope = sxy / sxx;
  e.degree = int(std::lround(e.slope));
  if (std::abs(e.slope - e.degree) > 0.01)
    throw NotPolynomial(name + ": log-log slope " + std::to_string(e.slope) + " is not an integer");
  return e;
}

int independence_rank(const std::vector<std::string> &names, const SystemParams &p, const Vec6 &x, double cutoff) {
  const auto c = evaluate_catalog(lift_point<Jet<cplx>>(x), p);
  Eigen::MatrixXd J(names.size(), 6);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto &g = c.at(names[i]).g;
    for (int j = 0; j < 6; ++j) J(i, j) = g[j].real();
  }
  // rank is unchanged by scaling rows (observables) and columns (coordinates); equilibrate both
  for (int it = 0; it < 20; ++it) {
    for (Eigen::Index j = 0; j < J.cols(); ++j)
      if (const double n = J.col(j).norm(); n > 0.0) J.col(j) /= n;
    for (Eigen::Index i = 0; i < J.rows(); ++i)
      if (const double n = J.row(i).norm(); n > 0.0) J.row(i) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto &s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > cutoff * s[0]) ++rank;
  return rank;
}

std::vector<std::string> generator_set(const SystemParams &p, bool reduced) {
  if (reduced) return {"H", "L2", "L3", p.kc4() ? "J2" : "J1", "K2"};
  return {"H", "L2", "L3", p.kc4() ? "J0" : "J1", "K0"};
}

std::vector<RealnessStats> realness_check(const SystemParams &p, int n, std::uint64_t seed, const SamplerConfig &cfg) {
  std::vector<std::string> names = {"J1", "J2", "K1", "K2", "K0"};
  if (p.kc4()) names.push_back("J0");
  std::vector<RealnessStats> out;
  for (const auto &nm : names) out.push_back({nm, n});
  for (const Vec6 &x : sample_points(p, seed, n, cfg)) {
    const auto c = evaluate_catalog(lift_point<Tracked>(x), p);
    for (auto &st : out) {
      const Tracked &t = c.at(st.name);
      const double im = std::abs(t.v.imag());
      st.max_imag = std::max(st.max_imag, im / std::max(t.m, 1.0));
      st.max_imag_plain = std::max(st.max_imag_plain, im / std::max(std::abs(t.v), 1.0));
    }
  }
  return out;
}

RatioSample kc3_r3_over_r2(const SystemParams &p, int n, std::uint64_t seed) {
  if (!p.kc3()) throw ConfigError("the R3/R2 ratio is recorded for KC3 only");
  std::vector<double> v;
  for (const Vec6 &x : sample_points(p, seed, n)) {
    const Context c(x, p);
    v.push_back((c.pb("J1", "K0") / c.pb("L3", "K0")).v.real());
  }
  RatioSample r;
  r.points = n;
  r.min = *std::min_element(v.begin(), v.end());
  r.max = *std::max_element(v.begin(), v.end());
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  r.median = v[v.size() / 2];
  return r;
}

BracketAxioms bracket_axioms(const SystemParams &p, int n, std::uint64_t seed, const SamplerConfig &cfg) {
  std::vector<std::string> names = {"H", "L2", "L3", "J1", "J2", "K1", "K2", "K0"};
  if (p.kc4()) names.push_back("J0");
  BracketAxioms out;
  out.points = n;
  const std::size_t m = names.size();
  for (const Vec6 &x : sample_points(p, seed, n, cfg)) {
    const Context c(x, p);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        if (a == b) continue;
        out.antisymmetry = std::max(out.antisymmetry, std::abs((c.pb(names[a], names[b]) + c.pb(names[b], names[a])).v));
      }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (std::size_t d = b + 1; d < m; ++d) {
          const std::string &F = names[a], &G = names[b], &K = names[d];
          ++out.triples;
          const J1t f = c.at(F).v, g = c.at(G).v, k = c.at(K).v;
          const Sides lz{poisson_bracket(f, g * k), poisson_bracket(f, g).v * k.v + g.v * poisson_bracket(f, k).v};
          out.leibniz = std::max(out.leibniz, residual(lz));
          const Tracked t1 = c.pb(F, c.pb1(G, K)), t2 = c.pb(G, c.pb1(K, F)), t3 = c.pb(K, c.pb1(F, G));
          const Tracked sum = t1 + t2 + t3;
          out.jacobi = std::max(out.jacobi, std::abs(sum.v) / std::max(sum.m, 1.0));
        }
  }
  out.triples /= std::max(n, 1);
  return out;
}

} // namespace kc
